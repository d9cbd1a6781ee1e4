#include <omp.h>

#include <exception>
#include <limits>

#include "d2t/kernels.hpp"

namespace d2t::kernels::omp {

PairCounts count_pairs(const std::vector<WeightedChunk>& chunks) {
  const int threads = omp_get_max_threads();
  std::vector<PairCounts> partial(static_cast<std::size_t>(threads));
  const auto n = static_cast<std::ptrdiff_t>(chunks.size());
#pragma omp parallel num_threads(threads)
  {
    PairCounts& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < n; ++c) {
      const auto& chunk = chunks[static_cast<std::size_t>(c)];
      for (std::size_t k = 0; k + 1 < chunk.ids.size(); ++k) {
        local[pair_key(chunk.ids[k], chunk.ids[k + 1])] += chunk.weight;
      }
    }
  }
  PairCounts counts = std::move(partial[0]);
  for (std::size_t t = 1; t < partial.size(); ++t) {
    for (const auto& [key, c] : partial[t]) counts[key] += c;
  }
  return counts;
}

std::vector<TokenSeq> encode_corpus(const BpeVocab& vocab, const std::vector<std::string>& texts) {
  std::vector<TokenSeq> out(texts.size());
  for_each_index(texts.size(), [&](std::size_t i) { out[i] = encode(vocab, texts[i]); });
  return out;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::exception_ptr first_error;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(d2t_for_each_error)
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace d2t::kernels::omp
