// Serial reference vs OpenMP kernels on synthetic corpora.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "d2t/bpe.hpp"
#include "d2t/corruptor.hpp"
#include "d2t/kernels.hpp"
#include "d2t/metrics.hpp"
#include "d2t/rng.hpp"

namespace {

std::vector<std::string> synthetic_texts(std::size_t n) {
  static const char* words[] = {"the", "coffee", "shop", "river", "name", "city", "located", "serves",
                                "food", "family", "friendly", "near", "centre", "price", "range", "high"};
  d2t::Rng rng(7);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string t;
    const std::size_t sentences = 2 + rng.uniform(3);
    for (std::size_t s = 0; s < sentences; ++s) {
      std::string sent = "Item" + std::to_string(i);
      for (std::size_t w = 0; w < 8; ++w) sent += std::string(" ") + words[rng.uniform(16)];
      t += (s ? " " : "") + sent + ".";
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<d2t::kernels::WeightedChunk> synthetic_chunks(std::size_t n) {
  std::vector<d2t::kernels::WeightedChunk> chunks;
  for (const auto& t : synthetic_texts(n)) {
    d2t::kernels::WeightedChunk c;
    for (char ch : t) c.ids.push_back(static_cast<unsigned char>(ch));
    chunks.push_back(std::move(c));
  }
  return chunks;
}

template <bool Parallel>
void BM_CountPairs(benchmark::State& state) {
  const auto chunks = synthetic_chunks(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto counts = Parallel ? d2t::kernels::omp::count_pairs(chunks) : d2t::kernels::serial::count_pairs(chunks);
    benchmark::DoNotOptimize(counts);
  }
}

template <bool Parallel>
void BM_EncodeCorpus(benchmark::State& state) {
  const auto texts = synthetic_texts(static_cast<std::size_t>(state.range(0)));
  const auto vocab = d2t::train_bpe(texts, 600, {"<data>", "<text>", "<eos>"});
  for (auto _ : state) {
    auto ids = Parallel ? d2t::kernels::omp::encode_corpus(vocab, texts)
                        : d2t::kernels::serial::encode_corpus(vocab, texts);
    benchmark::DoNotOptimize(ids);
  }
}

template <bool Parallel>
void BM_SfcCorpus(benchmark::State& state) {
  const auto texts = synthetic_texts(static_cast<std::size_t>(state.range(0)));
  std::vector<d2t::SourceRecord> records;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    d2t::SlotValueMr mr;
    mr.slots.push_back({"name", "Item" + std::to_string(i)});
    mr.slots.push_back({"area", "river"});
    records.push_back({"r" + std::to_string(i), d2t::MeaningRepresentation(mr), texts[i]});
  }
  d2t::CorruptOptions opts;
  opts.parallel = Parallel;
  for (auto _ : state) benchmark::DoNotOptimize(d2t::generate_sfc_corpus(records, 1, opts));
}

template <bool Parallel>
void BM_Cider(benchmark::State& state) {
  const auto texts = synthetic_texts(static_cast<std::size_t>(state.range(0)));
  std::vector<d2t::EvalPair> pairs;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    pairs.push_back({std::to_string(i), texts[i], {texts[(i + 1) % texts.size()], texts[i]}, std::nullopt});
  }
  for (auto _ : state) benchmark::DoNotOptimize(d2t::cider(pairs, Parallel));
}

}  // namespace

BENCHMARK(BM_CountPairs<false>)->Arg(2000);
BENCHMARK(BM_CountPairs<true>)->Arg(2000);
BENCHMARK(BM_EncodeCorpus<false>)->Arg(1000);
BENCHMARK(BM_EncodeCorpus<true>)->Arg(1000);
BENCHMARK(BM_SfcCorpus<false>)->Arg(1000);
BENCHMARK(BM_SfcCorpus<true>)->Arg(1000);
BENCHMARK(BM_Cider<false>)->Arg(500);
BENCHMARK(BM_Cider<true>)->Arg(500);

BENCHMARK_MAIN();
