#include "d2t/strings.hpp"

namespace d2t::strings {

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string normalize_space(std::string_view s) { return join(split_whitespace(s), " "); }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::size_t find_bounded(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.empty()) return std::string_view::npos;
  const bool guard_left = is_word_char(needle.front());
  const bool guard_right = is_word_char(needle.back());
  for (std::size_t pos = hay.find(needle, from); pos != std::string_view::npos;
       pos = hay.find(needle, pos + 1)) {
    const std::size_t end = pos + needle.size();
    const bool left_ok = !guard_left || pos == 0 || !is_word_char(hay[pos - 1]);
    const bool right_ok = !guard_right || end == hay.size() || !is_word_char(hay[end]);
    if (left_ok && right_ok) return pos;
  }
  return std::string_view::npos;
}

std::size_t count_bounded(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = find_bounded(hay, needle, 0); pos != std::string_view::npos;
       pos = find_bounded(hay, needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace d2t::strings
