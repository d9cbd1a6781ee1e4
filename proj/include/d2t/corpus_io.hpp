#pragma once

// JSONL corpus records and pipeline configuration.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2t/classifier.hpp"
#include "d2t/decoder.hpp"
#include "d2t/linearizer.hpp"
#include "d2t/mr.hpp"
#include "d2t/ngram.hpp"

namespace d2t {

struct CorpusRecord {
  std::string id;
  MrType mr_type = MrType::Triples;
  std::string mr_raw;
  std::optional<std::string> text;
  /// Additional references for evaluation; `text` counts as one when set.
  std::vector<std::string> references;

  MeaningRepresentation parse() const { return parse_mr(mr_type, mr_raw); }
  std::vector<std::string> all_references() const;
};

/// BadFormat on invalid JSON or missing id / mr_type / mr_raw.
CorpusRecord parse_record(std::string_view line);
std::string record_to_json(const CorpusRecord& rec);

/// Calls fn(line_number, line) for each non-blank line.
void for_each_line(std::istream& in, const std::function<void(std::size_t, const std::string&)>& fn);
std::vector<CorpusRecord> read_records(std::istream& in);

struct PipelineConfig {
  std::optional<std::uint64_t> seed;
  std::filesystem::path registry;
  std::filesystem::path vocab;
  std::filesystem::path lm;
  std::filesystem::path sfc;
  std::filesystem::path realization_table;
  DecodeConfig decode;
  SlotOrder slot_order = SlotOrder::Source;
  bool strict = false;
  bool rerank = true;
  bool parallel = true;
  std::size_t vocab_size = 4000;
  NgramOptions ngram;
  ClassifierOptions classifier;
  std::size_t repeat_count = 1;
};

/// JSON object with any of: seed, registry, vocab, lm, sfc,
/// realization_table, beam, alpha, max_tokens, slot_order, strict, rerank,
/// parallel, vocab_size, order, smoothing, epochs, learning_rate, repeat.
/// Relative paths resolve against the config file's directory.
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

}  // namespace d2t
