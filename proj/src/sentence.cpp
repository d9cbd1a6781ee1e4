#include "d2t/sentence.hpp"

#include "d2t/strings.hpp"

namespace d2t {

std::string SentenceSplit::joined() const { return strings::join(sentences, " "); }

std::set<std::string, std::less<>> SplitOptions::default_abbreviations() {
  return {"mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "e.g", "i.e", "no",
          "inc", "ltd", "co", "mt", "ft", "u.s", "u.k", "approx", "dept", "est", "gen", "gov"};
}

namespace {

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

// A sentence starts at an uppercase letter, possibly behind opening quotes.
bool starts_sentence(std::string_view text, std::size_t at) {
  while (at < text.size() && is_opener(text[at])) ++at;
  return at < text.size() && strings::is_upper(text[at]);
}

bool ends_with_abbreviation(std::string_view text, std::size_t period, const SplitOptions& opts) {
  std::size_t start = period;
  while (start > 0 && !strings::is_space(text[start - 1])) --start;
  std::string word(text.substr(start, period - start));
  while (!word.empty() && is_opener(word.front())) word.erase(word.begin());
  if (word.size() == 1 && strings::is_upper(word[0])) return true;  // initials
  return opts.abbreviations.count(strings::lower(word)) > 0;
}

}  // namespace

SentenceSplit split_sentences(std::string_view raw, const SplitOptions& opts) {
  const std::string text = strings::normalize_space(raw);
  SentenceSplit out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    std::size_t j = i;
    while (j < text.size() && is_terminal(text[j])) ++j;
    while (j < text.size() && is_closer(text[j])) ++j;
    const bool at_end = j == text.size();
    const bool boundary =
        at_end || (text[j] == ' ' && starts_sentence(text, j + 1));
    const bool suppressed =
        !at_end && text[first] == '.' && j == first + 1 && ends_with_abbreviation(text, first, opts);
    if (boundary && !suppressed) {
      out.sentences.push_back(text.substr(start, j - start));
      start = at_end ? j : j + 1;
    }
    i = j;
  }
  if (start < text.size()) out.sentences.push_back(text.substr(start));
  return out;
}

}  // namespace d2t
