#pragma once

// Model-facing sequences: <data> d_1..d_k <text> t_1..t_m <eos>, with
// positions, per-token state ids and the text-only loss mask.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2t/bpe.hpp"
#include "d2t/contracts.hpp"
#include "d2t/linearizer.hpp"

namespace d2t {

enum class StateMode { Coarse, Fine };

StateMode parse_state_mode(std::string_view name);

struct TrainingSequence {
  TokenSeq ids;
  std::vector<std::size_t> positions;
  TokenSeq states;
  std::vector<bool> loss_mask;
  std::size_t data_len = 0;  // data subword tokens, excluding <data> and <text>

  std::size_t text_start() const { return data_len + 2; }
  bool operator==(const TrainingSequence&) const = default;
};

/// With `text` absent the sequence stops at <text> (a generation prefix) and
/// the mask is all false. Otherwise the text is followed by <eos>.
TrainingSequence build_sequence(const LinearizedData& lin, const std::optional<std::string>& text,
                                const BpeVocab& vocab, StateMode mode = StateMode::Fine);

/// Fine-grained states: each token's state is the last special token at or
/// before it. Exposed for callers that extend a prefix.
TokenSeq fine_states(const BpeVocab& vocab, const TokenSeq& ids);

/// -sum over masked positions of ln P(s_i | s_0..s_{i-1}).
double masked_nll(const TrainingSequence& seq, const AutoregressiveScorer& scorer);

/// One JSON object: {"ids":[..],"states":[..],"mask":[0|1..],"data_len":k}.
std::string sequence_to_json(const TrainingSequence& seq);
TrainingSequence sequence_from_json(std::string_view line);

}  // namespace d2t
