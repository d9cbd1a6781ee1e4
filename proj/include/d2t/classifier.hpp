#pragma once

// Feature-based five-way fidelity classifier: hand-built (data, text)
// features fed to a multinomial logistic regression.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "d2t/contracts.hpp"
#include "d2t/corruptor.hpp"
#include "d2t/linearizer.hpp"

namespace d2t {

enum Feature : std::size_t {
  kCoverage,          // share of distinct values found in the text
  kAnyMissing,        // some value not found
  kDuplicateSentence, // a sentence occurs twice
  kSentenceRatio,     // log(sentences / expected sentences)
  kForeign,           // share of words unexplained by data or lexicon
  kAnyForeign,
  kOverMultiplicity,  // share of values mentioned more often than in the data
  kAnyOver,
  kFeatureCount
};

using FeatureVector = std::array<double, kFeatureCount>;

struct ClassifierOptions {
  std::size_t epochs = 400;
  double learning_rate = 0.5;
  std::uint64_t seed = 0;
  /// Words seen in the texts of at least this many records form the
  /// background lexicon, unless half of those records have them in a value.
  std::size_t lexicon_min_records = 3;
};

class FeatureClassifier final : public FidelityClassifier {
 public:
  /// Weight rows per label: kFeatureCount standardized-feature weights, then a bias.
  using Weights = std::array<std::array<double, kFeatureCount + 1>, kLabelCount>;

  FeatureVector features(const LinearizedData& data, std::string_view text) const;
  std::array<double, kLabelCount> probabilities(const FeatureVector& f) const;
  Label classify(const LinearizedData& data, std::string_view text) const override;

  std::string to_text() const;
  static FeatureClassifier from_text(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static FeatureClassifier load(const std::filesystem::path& path);

  bool operator==(const FeatureClassifier& o) const {
    return lexicon == o.lexicon && sentence_rate == o.sentence_rate && mean == o.mean && scale == o.scale &&
           weights == o.weights;
  }

  // Model state; filled by train_classifier or from_text.
  std::set<std::string, std::less<>> lexicon;
  /// Mean accurate sentences per data value, by mr_type name.
  std::map<std::string, double, std::less<>> sentence_rate;
  FeatureVector mean{};
  FeatureVector scale{};
  Weights weights{};
};

/// Lower-cased words of `text` with surrounding ASCII punctuation removed.
std::vector<std::string> feature_words(std::string_view text);

/// Linearization used for training examples; registers tokens as needed.
LinearizedData linearize_for_features(const MeaningRepresentation& mr);

/// Full-batch gradient descent on softmax cross-entropy. `loss_history`, if
/// given, receives the mean loss before each epoch.
FeatureClassifier train_classifier(const std::vector<CorruptionExample>& corpus, const ClassifierOptions& opts = {},
                                   std::vector<double>* loss_history = nullptr);

}  // namespace d2t
