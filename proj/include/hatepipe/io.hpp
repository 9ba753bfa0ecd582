#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hatepipe::io {

// Whole-file read. Files ending in ".gz" are transparently decompressed.
// Throws ResourceError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view contents);

// Hex SHA-256 of the raw (not decompressed) file bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256(std::string_view bytes);

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> lines(std::string_view text);

}  // namespace hatepipe::io
