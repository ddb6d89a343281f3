#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mscc {

// Shortest decimal form that parses back to the identical double.
// All file formats use this so that rewriting a parsed file is byte-stable.
std::string format_double(double v);

// Strict full-token parse; throws DataError naming `what` on failure.
double parse_double(std::string_view token, const std::string& what);
long parse_long(std::string_view token, const std::string& what);

std::vector<std::string> split_ws(std::string_view line);

// FNV-1a 64-bit digest, hex-encoded. Used for provenance headers only.
std::string fnv1a_hex(std::string_view bytes);
std::string digest_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

} // namespace mscc
