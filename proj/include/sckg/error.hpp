#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sckg {

/// Every failure raised by the library carries one of these codes so callers
/// (and the CLI) can branch on the kind without parsing messages.
enum class ErrorCode {
  kMalformedDocument,
  kDepthViolation,
  kDuplicateId,
  kOrphanTag,
  kCycleDetected,
  kUnknownTag,
  kInvalidIri,
  kUnknownConcept,
  kUnknownArtwork,
  kUnresolvedRule,
  kNonLeafInclude,
  kUnreadableRoot,
  kEmptyInput,
  kEmptyImage,
  kNoSwatches,
  kImageDecode,
  kIo,
  kConfig,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error in a parsed document, positioned at a 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace sckg
