#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>

namespace sckg {

/// Reads a whole file; throws Error(kIo) on failure.
std::string read_file(const std::filesystem::path& path);

/// Writes bytes exactly (no newline translation), creating parent dirs.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// 1-based (line, column) of a byte offset within `text`.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset);

}  // namespace sckg
