#pragma once

// Corpus-level loops in two builds: a serial reference and an OpenMP
// version. Both produce identical results; tests assert parity.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "d2t/bpe.hpp"

namespace d2t::kernels {

struct WeightedChunk {
  TokenSeq ids;
  std::int64_t weight = 1;
};

/// Adjacent-pair occurrence counts keyed by pair_key(left, right).
using PairCounts = std::unordered_map<std::uint64_t, std::int64_t>;

namespace serial {

PairCounts count_pairs(const std::vector<WeightedChunk>& chunks);
std::vector<TokenSeq> encode_corpus(const BpeVocab& vocab, const std::vector<std::string>& texts);
/// Calls body(i) for every i in [0, n). Bodies write only to slot i of their
/// outputs. The exception from the lowest failing index is rethrown.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace serial

namespace omp {

PairCounts count_pairs(const std::vector<WeightedChunk>& chunks);
std::vector<TokenSeq> encode_corpus(const BpeVocab& vocab, const std::vector<std::string>& texts);
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace omp

inline void for_each_index(bool parallel, std::size_t n, const std::function<void(std::size_t)>& body) {
  parallel ? omp::for_each_index(n, body) : serial::for_each_index(n, body);
}

}  // namespace d2t::kernels
