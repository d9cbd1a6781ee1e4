#pragma once

// Corpus metrics: BLEU-4, ROUGE-L, CIDEr, slot error rate, semantic-accuracy
// fractions, Dale-Chall readability and simple corpus statistics.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "d2t/contracts.hpp"
#include "d2t/mr.hpp"

namespace d2t {

struct EvalPair {
  std::string id;
  std::string hypothesis;
  std::vector<std::string> references;
  std::optional<MeaningRepresentation> data;
};

/// Lower-cased tokens with ASCII punctuation split off.
std::vector<std::string> metric_tokens(std::string_view text);

/// Corpus BLEU-4 in [0, 100]: clipped n-gram counts against the maximum
/// reference count, brevity penalty against the closest reference length.
double bleu(const std::vector<EvalPair>& pairs, bool parallel = false);

struct BleuDetail {
  std::array<double, 4> precision{};  // clipped, n = 1..4
  double brevity_penalty = 1.0;
  double hyp_len = 0.0;
  double ref_len = 0.0;
  double score = 0.0;
};
BleuDetail bleu_detail(const std::vector<EvalPair>& pairs, bool parallel = false);

/// Mean LCS F-measure in [0, 1] with beta = 1.2; precision and recall each
/// take their maximum over references.
double rouge_l(const std::vector<EvalPair>& pairs, bool parallel = false);
double lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// CIDEr without length penalty: 10 x mean over n = 1..4 of the average
/// TF-IDF cosine to each reference, document frequencies over reference sets.
double cider(const std::vector<EvalPair>& pairs, bool parallel = false);

/// value -> acceptable surface variants (the value itself always counts).
using RealizationTable = std::map<std::string, std::vector<std::string>, std::less<>>;
/// Tab-separated "value<TAB>variant<TAB>variant..." lines; '#' starts a comment.
RealizationTable load_realization_table(const std::filesystem::path& path);

struct SerResult {
  double ser = 0.0;
  std::size_t missed = 0;
  std::size_t extra = 0;
  std::size_t total = 0;
  std::vector<bool> accurate;  // A_H per pair
};

SerResult slot_error_rate(const std::vector<EvalPair>& pairs, const RealizationTable& table = {});

/// Fraction of true entries; EmptySet when empty.
double accurate_fraction(const std::vector<bool>& labels);
double hsa(const SerResult& r);
double dsa(const std::vector<Label>& labels);
/// Share of ids whose binary labels agree; IdMismatch unless both cover the same ids.
double label_agreement(const std::map<std::string, bool>& manual, const std::map<std::string, bool>& automatic);

using WordSet = std::set<std::string, std::less<>>;

/// The shipped easy-word list (lower-case, one word per line).
WordSet load_easy_words(const std::filesystem::path& path = std::filesystem::path(D2T_DATA_DIR) /
                                                          "dale_chall_easy_words.txt");

struct DaleChallOptions {
  /// Extra words treated as easy, such as proper nouns from the source data.
  WordSet extra_easy;
};

/// 0.1579 * PDW + 0.0496 * ASL, plus 3.6365 when PDW > 5. Purely numeric
/// tokens count as easy.
double dale_chall(const std::vector<std::string>& corpus, const WordSet& easy_words,
                  const DaleChallOptions& opts = {});
double dale_chall_formula(double pct_difficult, double avg_sentence_length);

enum class CapitalBasis { UniqueWords, Tokens };

struct CorpusStats {
  std::size_t unique_words = 0;
  double pct_capitalized = 0.0;
};

/// Whitespace-delimited word forms with leading and trailing punctuation
/// removed; case is kept.
CorpusStats corpus_stats(const std::vector<std::string>& corpus, CapitalBasis basis = CapitalBasis::UniqueWords);

}  // namespace d2t
