#pragma once

// Interpolated n-gram language model over token ids with additive smoothing.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "d2t/contracts.hpp"
#include "d2t/sequence.hpp"

namespace d2t {

struct NgramOptions {
  std::size_t order = 4;
  double smoothing = 0.01;
  /// Highest order first; defaults to weights proportional to order..1.
  std::vector<double> weights;
};

std::vector<double> default_interpolation_weights(std::size_t order);

class NgramScorer final : public AutoregressiveScorer {
 public:
  struct ContextCounts {
    std::map<TokenId, std::int64_t> next;
    std::int64_t total = 0;

    bool operator==(const ContextCounts&) const = default;
  };
  /// tables[k] holds contexts of length k (order k + 1).
  using Table = std::map<TokenSeq, ContextCounts>;

  NgramScorer(std::size_t vocab_size, const NgramOptions& opts);

  /// Counts each position i (with up to order-1 preceding tokens as context)
  /// whose mask entry is true; an empty mask counts every position.
  void add_sequence(std::span<const TokenId> ids, const std::vector<bool>& mask = {});

  std::size_t vocab_size() const override { return vocab_size_; }
  std::size_t order() const { return weights_.size(); }
  double smoothing() const { return smoothing_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Table>& tables() const { return tables_; }

  /// Orders whose context is unseen (or longer than the prefix) hand their
  /// weight down to the next lower order.
  std::vector<double> next_distribution(std::span<const TokenId> prefix) const override;
  double probability(std::span<const TokenId> prefix, TokenId next) const override;

  std::string to_text() const;
  static NgramScorer from_text(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static NgramScorer load(const std::filesystem::path& path);

  bool operator==(const NgramScorer& o) const {
    return vocab_size_ == o.vocab_size_ && smoothing_ == o.smoothing_ && weights_ == o.weights_ &&
           tables_ == o.tables_;
  }

 private:
  template <typename Visit>
  void mix(std::span<const TokenId> prefix, Visit&& visit) const;

  std::size_t vocab_size_;
  double smoothing_;
  std::vector<double> weights_;
  std::vector<Table> tables_;
};

/// Counts only loss-masked (text) positions, as the training loss would.
NgramScorer train_ngram(const std::vector<TrainingSequence>& corpus, std::size_t vocab_size,
                        const NgramOptions& opts = {});

}  // namespace d2t
