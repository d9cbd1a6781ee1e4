#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "d2t/pipeline.hpp"

namespace d2t::testing {

struct OverfitResult {
  std::size_t records = 0;
  std::size_t exact = 0;
  EvalReport report;
  std::vector<std::string> mismatches;  // "id: got | want"
  double seconds = 0.0;
};

/// Trains bpe, lm and sfc on overfit_corpus() through the pipeline commands,
/// generates for every record and evaluates against the training texts.
/// All model files are written under `dir`.
OverfitResult run_overfit(const std::filesystem::path& dir, std::uint64_t seed = 1);

/// Pipeline settings used by run_overfit.
PipelineConfig overfit_config(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace d2t::testing
