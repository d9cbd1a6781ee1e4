#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace d2t {

struct SentenceSplit {
  std::vector<std::string> sentences;

  std::string joined() const;
  bool operator==(const SentenceSplit&) const = default;
};

struct SplitOptions {
  /// Lower-cased words (without the final period) that never end a sentence.
  std::set<std::string, std::less<>> abbreviations = default_abbreviations();

  static std::set<std::string, std::less<>> default_abbreviations();
};

/// Rule-based splitter: a run of '.', '!' or '?' (plus closing quotes or
/// brackets) ends a sentence when followed by whitespace and an uppercase
/// letter (optionally behind opening quotes), or by the end of the text. A
/// lone '.' after a known abbreviation or an uppercase initial does not.
/// Whitespace is normalized first.
SentenceSplit split_sentences(std::string_view text, const SplitOptions& opts = {});

}  // namespace d2t
