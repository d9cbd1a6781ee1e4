#include "d2t/kernels.hpp"

namespace d2t::kernels::serial {

PairCounts count_pairs(const std::vector<WeightedChunk>& chunks) {
  PairCounts counts;
  for (const auto& chunk : chunks) {
    for (std::size_t k = 0; k + 1 < chunk.ids.size(); ++k) {
      counts[pair_key(chunk.ids[k], chunk.ids[k + 1])] += chunk.weight;
    }
  }
  return counts;
}

std::vector<TokenSeq> encode_corpus(const BpeVocab& vocab, const std::vector<std::string>& texts) {
  std::vector<TokenSeq> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(encode(vocab, t));
  return out;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace d2t::kernels::serial
