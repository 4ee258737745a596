#include "sckg/error.hpp"

#include <fmt/format.h>

namespace sckg {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kDepthViolation: return "DepthViolation";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kOrphanTag: return "OrphanTag";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kUnknownTag: return "UnknownTag";
    case ErrorCode::kInvalidIri: return "InvalidIri";
    case ErrorCode::kUnknownConcept: return "UnknownConcept";
    case ErrorCode::kUnknownArtwork: return "UnknownArtwork";
    case ErrorCode::kUnresolvedRule: return "UnresolvedRule";
    case ErrorCode::kNonLeafInclude: return "NonLeafInclude";
    case ErrorCode::kUnreadableRoot: return "UnreadableRoot";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyImage: return "EmptyImage";
    case ErrorCode::kNoSwatches: return "NoSwatches";
    case ErrorCode::kImageDecode: return "ImageDecode";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", to_string(code), message)), code_(code) {}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(ErrorCode::kMalformedDocument,
            fmt::format("line {}, column {}: {}", line, column, message)),
      line_(line),
      column_(column) {}

}  // namespace sckg
