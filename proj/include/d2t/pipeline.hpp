#pragma once

// Batch commands behind the d2t tool. Each reads JSONL from a stream and
// writes JSONL (or a report) to another; logs go to a separate stream.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2t/bpe.hpp"
#include "d2t/classifier.hpp"
#include "d2t/corpus_io.hpp"
#include "d2t/error.hpp"
#include "d2t/linearizer.hpp"
#include "d2t/metrics.hpp"
#include "d2t/ngram.hpp"

namespace d2t {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model file that is missing, unreadable or inconsistent with the data.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// 1 usage, 2 data, 3 model.
int exit_code_for(const std::exception& e);

struct CommandReport {
  std::size_t records = 0;
  std::size_t written = 0;
  std::vector<std::string> failed_ids;
};

struct Models {
  SpecialTokenRegistry registry;
  BpeVocab vocab;
  std::optional<NgramScorer> lm;
  std::optional<FeatureClassifier> sfc;
};

Models load_models(const PipelineConfig& cfg, bool need_lm, bool want_sfc);

/// Adds data_linearized to each record. Without a registry file, tokens are
/// registered on the fly.
CommandReport cmd_linearize(std::istream& in, std::ostream& out, std::ostream& log, const PipelineConfig& cfg);

/// One line per example: id, label, data_linearized, text, seed, mr_type, mr_raw.
CommandReport cmd_corrupt(std::istream& in, std::ostream& out, std::ostream& log, const PipelineConfig& cfg);

/// Builds the registry from the corpus (extending cfg.registry if it
/// exists), trains BPE on linearized data plus texts, and writes both.
void cmd_train_bpe(std::istream& in, std::ostream& log, const PipelineConfig& cfg);
void cmd_train_lm(std::istream& in, std::ostream& log, const PipelineConfig& cfg);
/// Consumes cmd_corrupt output.
void cmd_train_sfc(std::istream& in, std::ostream& log, const PipelineConfig& cfg);

/// One line per record: id, text, top_label, candidates [{text, log_score, label}].
CommandReport cmd_generate(std::istream& in, std::ostream& out, std::ostream& log, const PipelineConfig& cfg);

struct EvalReport {
  std::size_t pairs = 0;
  double bleu = 0.0;
  double rouge_l = 0.0;
  double cider = 0.0;
  double ser = 0.0;
  double hsa = 0.0;
  std::optional<double> dsa;
  std::optional<double> dale_chall;
  std::size_t unique_words = 0;
  double pct_capitalized = 0.0;

  std::string to_json() const;
  std::string to_table() const;
};

/// `hyps` holds {id, text} lines; `refs` holds corpus records.
EvalReport cmd_evaluate(std::istream& hyps, std::istream& refs, const PipelineConfig& cfg);

/// Texts from JSONL records ("text" and "references"), WebNLG-style XML
/// (<lex> elements) or plain lines.
std::vector<std::string> read_texts(std::istream& in);

struct StatsReport {
  std::size_t texts = 0;
  CorpusStats stats;
  std::optional<double> dale_chall;

  std::string to_json() const;
};

StatsReport cmd_stats(std::istream& in, CapitalBasis basis);

}  // namespace d2t
