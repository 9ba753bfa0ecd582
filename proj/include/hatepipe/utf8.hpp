#pragma once

#include <string>
#include <string_view>

namespace hatepipe::utf8 {

// Strict decoding: rejects overlong forms, surrogates and out-of-range values.
bool is_valid(std::string_view s);

// Throws ParseError on invalid input.
std::u32string decode(std::string_view s);

std::string encode(std::u32string_view cps);
void append(std::string& out, char32_t cp);

// "U+064A" style notation.
std::string format_codepoint(char32_t cp);
char32_t parse_codepoint(std::string_view text);

}  // namespace hatepipe::utf8
