#pragma once

// UTF-8 helpers. Text is handled as sequences of Unicode scalar values.

#include <string>
#include <string_view>

namespace tabscore::text {

/// Decodes UTF-8. Invalid or truncated sequences become U+FFFD.
std::u32string decode_utf8(std::string_view in);

std::string encode_utf8(std::u32string_view in);
void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);

/// Collapses every run of whitespace to one ASCII space and trims both ends.
std::string collapse_whitespace(std::string_view in);

/// Removes all whitespace.
std::u32string strip_whitespace(std::u32string_view in);

/// Number of scalar values in a UTF-8 string.
std::size_t scalar_length(std::string_view in);

}  // namespace tabscore::text
