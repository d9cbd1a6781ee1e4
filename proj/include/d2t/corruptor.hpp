#pragma once

// Synthetic training data for the fidelity classifier: each (data, text)
// record yields its accurate pair plus omission, repetition, hallucination
// and value-error corruptions of the text.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2t/contracts.hpp"
#include "d2t/mr.hpp"
#include "d2t/rng.hpp"
#include "d2t/sentence.hpp"

namespace d2t {

struct CorruptionExample {
  MeaningRepresentation data;
  std::string text;
  Label label = Label::Accurate;
  std::string source_id;
  /// Per-record sub-seed the example was drawn with.
  std::uint64_t seed = 0;
};

struct SourceRecord {
  std::string id;
  MeaningRepresentation data;
  std::string text;
};

/// Sentence list with `sentence` inserted before index `before`.
std::vector<std::string> insert_sentence(std::vector<std::string> sentences, std::string sentence,
                                         std::size_t before);

// Each returns the corrupted text, or nullopt when the corruption does not
// apply. Outputs are whitespace-normalized.
std::optional<std::string> make_omission(std::string_view text);
std::optional<std::string> make_repetition(std::string_view text, Rng& rng);
/// `corpus` holds every record's text; `self` is the index of `text` in it.
std::optional<std::string> make_hallucination(std::string_view text, Rng& rng,
                                              const std::vector<std::string>& corpus, std::size_t self);
std::optional<std::string> make_value_error(const MeaningRepresentation& data, std::string_view text,
                                            Rng& rng);

/// Replaces the first word-bounded occurrence of `value`; nullopt if absent.
std::optional<std::string> apply_value_error(std::string_view text, std::string_view value,
                                             std::string_view replacement);

struct CorruptOptions {
  /// Extra rounds of repetition, hallucination and value-error draws.
  std::size_t repeat_count = 1;
  bool parallel = true;
};

/// Examples grouped by record in input order; within a record: accurate,
/// omission, repetition, hallucination, value_error (then further rounds).
std::vector<CorruptionExample> generate_sfc_corpus(const std::vector<SourceRecord>& records,
                                                   std::uint64_t seed, const CorruptOptions& opts = {});

}  // namespace d2t
