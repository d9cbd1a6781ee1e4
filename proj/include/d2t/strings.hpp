#pragma once

// Byte-oriented string helpers shared by the parsers, the corruptor and the
// metrics. All character classes are ASCII; bytes >= 0x80 count as word
// characters so that UTF-8 letters are never treated as boundaries.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace d2t::strings {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
inline bool is_word_char(char c) {
  return is_alpha(c) || is_digit(c) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}
inline bool is_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return u > 0x20 && u < 0x7f && !is_alpha(c) && !is_digit(c);
}
inline char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }
inline char to_upper(char c) { return is_lower(c) ? static_cast<char>(c - 'a' + 'A') : c; }

std::string_view trim(std::string_view s);
std::string lower(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
/// Collapses whitespace runs to one space and trims both ends.
std::string normalize_space(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Position of the first occurrence of `needle` in `hay` at or after `from`
/// whose edges fall on word boundaries, or npos.
std::size_t find_bounded(std::string_view hay, std::string_view needle, std::size_t from = 0);
std::size_t count_bounded(std::string_view hay, std::string_view needle);

}  // namespace d2t::strings
