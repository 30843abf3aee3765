#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace topiclab::util {

std::string base64_encode(std::string_view bytes);
/// Throws Error(Malformed) on characters outside the standard alphabet or a
/// length that is not a multiple of four.
std::string base64_decode(std::string_view text);

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

std::string to_lower_ascii(std::string_view text);
std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place, so a
/// failure never leaves a partial file at `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Reads a one-entry-per-line word list; blank lines and `#` comments are
/// skipped, entries are trimmed and lowercased.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

std::filesystem::path resource_path(std::string_view name);

}  // namespace topiclab::util
