#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 helpers. Letter/case tables cover Latin, Greek (monotonic and
// polytonic) and Cyrillic, which is all the corpus needs.
namespace kath::utf8 {

bool is_valid(std::string_view text);

// Decodes the code point starting at `pos`; advances `pos` past it.
// Returns nullopt on malformed input.
std::optional<char32_t> decode(std::string_view text, std::size_t& pos);

std::vector<char32_t> code_points(std::string_view text);
void append(std::string& out, char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

std::optional<char32_t> first(std::string_view text);
std::optional<char32_t> last(std::string_view text);
// Byte length of the last code point, 0 for empty text.
std::size_t last_width(std::string_view text);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_upper(char32_t cp);
bool is_punct(char32_t cp);
char32_t to_lower(char32_t cp);

std::string lower(std::string_view text);

}  // namespace kath::utf8
