#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace hotspot::io {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

// Strict full-field parse; nullopt on any trailing garbage, empty input or
// non-finite result.
std::optional<double> parse_double(std::string_view text);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Lower-case hex SHA-256 of a file's bytes / of a buffer.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

}  // namespace hotspot::io
