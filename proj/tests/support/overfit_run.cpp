#include "overfit_run.hpp"

#include <chrono>
#include <json.hpp>
#include <sstream>

#include "toy_corpus.hpp"

namespace d2t::testing {

PipelineConfig overfit_config(const std::filesystem::path& dir, std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.seed = seed;
  cfg.registry = dir / "registry.tsv";
  cfg.vocab = dir / "bpe.vocab";
  cfg.lm = dir / "lm.ngram";
  cfg.sfc = dir / "sfc.model";
  // Memorizing twenty texts needs long contexts and light smoothing.
  cfg.ngram.order = 8;
  cfg.ngram.smoothing = 1e-4;
  return cfg;
}

OverfitResult run_overfit(const std::filesystem::path& dir, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(dir);
  const PipelineConfig cfg = overfit_config(dir, seed);
  const auto records = overfit_corpus();

  std::string corpus_jsonl, prompts_jsonl;
  for (const auto& r : records) {
    corpus_jsonl += record_to_json(r) + "\n";
    CorpusRecord prompt = r;
    prompt.text.reset();
    prompts_jsonl += record_to_json(prompt) + "\n";
  }
  std::ostringstream log;
  {
    std::istringstream in(corpus_jsonl);
    cmd_train_bpe(in, log, cfg);
  }
  {
    std::istringstream in(corpus_jsonl);
    cmd_train_lm(in, log, cfg);
  }
  std::ostringstream corrupted;
  {
    std::istringstream in(corpus_jsonl);
    cmd_corrupt(in, corrupted, log, cfg);
  }
  {
    std::istringstream in(corrupted.str());
    cmd_train_sfc(in, log, cfg);
  }
  std::ostringstream generated;
  {
    std::istringstream in(prompts_jsonl);
    cmd_generate(in, generated, log, cfg);
  }

  OverfitResult result;
  result.records = records.size();
  std::istringstream gen_in(generated.str());
  std::size_t k = 0;
  for (std::string line; std::getline(gen_in, line); ++k) {
    const auto j = nlohmann::json::parse(line);
    const std::string got = j.at("text").get<std::string>();
    const std::string& want = *records.at(k).text;
    if (got == want) {
      ++result.exact;
    } else {
      result.mismatches.push_back(records[k].id + ": " + got + " | " + want);
    }
  }
  std::istringstream hyps(generated.str()), refs(corpus_jsonl);
  result.report = cmd_evaluate(hyps, refs, cfg);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace d2t::testing
