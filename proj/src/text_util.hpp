#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bootlex {

std::vector<std::string_view> split(std::string_view text, char sep);
/// Splits on runs of spaces and tabs.
std::vector<std::string_view> split_ws(std::string_view text);
std::string_view trim(std::string_view text);
std::string to_lower_ascii(std::string_view text);
bool ends_with_ci(std::string_view text, std::string_view suffix);

/// Throws ResourceSyntaxError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Non-empty, non-comment lines of a resource file with 1-based line numbers.
struct ResourceLine {
  std::size_t number;
  std::string_view text;
};
std::vector<ResourceLine> resource_lines(std::string_view text);
std::vector<ResourceLine> resource_lines(std::string&& text) = delete;

/// Throws ResourceSyntaxError("<origin>:<line>: <message>").
[[noreturn]] void resource_error(const std::string& origin, std::size_t line, const std::string& message);

/// FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view data);

}  // namespace bootlex
