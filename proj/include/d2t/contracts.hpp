#pragma once

// The two model contracts the decoder is written against. Reference
// implementations live in ngram.hpp and classifier.hpp.

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "d2t/bpe.hpp"
#include "d2t/linearizer.hpp"

namespace d2t {

enum class Label { Accurate, Omission, Repetition, Hallucination, ValueError };

inline constexpr std::size_t kLabelCount = 5;
inline constexpr std::array<Label, kLabelCount> kAllLabels = {
    Label::Accurate, Label::Omission, Label::Repetition, Label::Hallucination, Label::ValueError};

std::string_view label_name(Label label);
Label parse_label(std::string_view name);

class AutoregressiveScorer {
 public:
  virtual ~AutoregressiveScorer() = default;

  virtual std::size_t vocab_size() const = 0;
  /// P(next | prefix) over the whole vocabulary; non-negative, sums to 1.
  virtual std::vector<double> next_distribution(std::span<const TokenId> prefix) const = 0;
  virtual double probability(std::span<const TokenId> prefix, TokenId next) const {
    return next_distribution(prefix).at(next);
  }
};

class FidelityClassifier {
 public:
  virtual ~FidelityClassifier() = default;

  virtual Label classify(const LinearizedData& data, std::string_view text) const = 0;
};

}  // namespace d2t
