#pragma once

// Beam search over an AutoregressiveScorer, scoring only the generated text
// tokens, followed by reranking with a FidelityClassifier.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "d2t/bpe.hpp"
#include "d2t/contracts.hpp"
#include "d2t/linearizer.hpp"
#include "d2t/mr.hpp"
#include "d2t/sequence.hpp"

namespace d2t {

struct BeamCandidate {
  TokenSeq ids;  // generated text tokens, including the final <eos> if any
  double text_logprob_sum = 0.0;
  double normalized_score = 0.0;
  bool complete = false;
  /// Completed by the length cap rather than by <eos>.
  bool forced = false;
};

struct DecodeConfig {
  std::size_t beam_width = 5;
  double alpha = 0.75;
  /// Defaults to 2 * data_len + 64 when unset.
  std::optional<std::size_t> max_text_tokens;
};

/// ln(prod p) - alpha * ln(max(1, n - 1)) for n = probs.size().
double beam_score(std::span<const double> probs, double alpha);
double normalize_score(double logprob_sum, std::size_t n_tokens, double alpha);

/// Orders by normalized score descending, then by token ids ascending.
bool candidate_before(const BeamCandidate& a, const BeamCandidate& b);

/// `prefix` must end with the <text> token. Returns at most beam_width
/// complete candidates, best first.
std::vector<BeamCandidate> beam_search(const TrainingSequence& prefix, const AutoregressiveScorer& scorer,
                                       TokenId eos, const DecodeConfig& cfg = {});

struct RankedCandidate {
  BeamCandidate candidate;
  std::string text;
  Label label = Label::Accurate;
};

/// Stable partition: candidates labeled accurate first. The classifier is
/// called once per candidate.
std::vector<RankedCandidate> rerank(const std::vector<BeamCandidate>& candidates, const LinearizedData& data,
                                    const FidelityClassifier& clf, const BpeVocab& vocab);

/// Candidate text without the trailing <eos>.
std::string candidate_text(const BeamCandidate& c, const BpeVocab& vocab, TokenId eos);

struct GenerateOptions {
  DecodeConfig decode;
  LinearizeOptions linearize;
  bool rerank = true;
};

struct GenerateResult {
  std::string text;
  std::optional<Label> top_label;
  std::vector<RankedCandidate> candidates;
};

/// Linearize, build the prefix, search, rerank and decode. With a null
/// classifier (or opts.rerank false) the beam order is kept; labels are
/// still reported when a classifier is given.
GenerateResult generate(const MeaningRepresentation& mr, const AutoregressiveScorer& scorer,
                        const FidelityClassifier* clf, const BpeVocab& vocab, const SpecialTokenRegistry& reg,
                        const GenerateOptions& opts = {});

}  // namespace d2t
