#include "d2t/sequence.hpp"

#include <cmath>
#include <json.hpp>

#include "d2t/error.hpp"

namespace d2t {

StateMode parse_state_mode(std::string_view name) {
  if (name == "fine") return StateMode::Fine;
  if (name == "coarse") return StateMode::Coarse;
  throw Error(ErrorCode::BadFormat, "unknown state mode '" + std::string(name) + "'");
}

namespace {

TokenId require_special(const BpeVocab& vocab, std::string_view token) {
  if (auto id = vocab.special_id(token)) return *id;
  throw Error(ErrorCode::MissingSpecial, "vocabulary does not reserve " + std::string(token));
}

}  // namespace

TokenSeq fine_states(const BpeVocab& vocab, const TokenSeq& ids) {
  TokenSeq states(ids.size());
  TokenId current = ids.empty() ? 0 : ids.front();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (vocab.is_special(ids[i])) current = ids[i];
    states[i] = current;
  }
  return states;
}

TrainingSequence build_sequence(const LinearizedData& lin, const std::optional<std::string>& text,
                                const BpeVocab& vocab, StateMode mode) {
  const TokenId data_id = require_special(vocab, kDataToken);
  const TokenId text_id = require_special(vocab, kTextToken);
  for (const auto& sp : lin.special_positions) require_special(vocab, sp.token);

  TrainingSequence seq;
  seq.ids.push_back(data_id);
  const TokenSeq data_ids = encode(vocab, lin.text);
  seq.ids.insert(seq.ids.end(), data_ids.begin(), data_ids.end());
  seq.data_len = data_ids.size();
  seq.ids.push_back(text_id);
  if (text) {
    const TokenId eos_id = require_special(vocab, kEosToken);
    const TokenSeq text_ids = encode(vocab, *text);
    seq.ids.insert(seq.ids.end(), text_ids.begin(), text_ids.end());
    seq.ids.push_back(eos_id);
  }

  const std::size_t n = seq.ids.size();
  seq.positions.resize(n);
  for (std::size_t i = 0; i < n; ++i) seq.positions[i] = i;

  if (mode == StateMode::Fine) {
    seq.states = fine_states(vocab, seq.ids);
  } else {
    seq.states.assign(n, text_id);
    for (std::size_t i = 0; i <= seq.data_len; ++i) seq.states[i] = data_id;
  }

  seq.loss_mask.assign(n, false);
  for (std::size_t i = seq.text_start(); i < n; ++i) seq.loss_mask[i] = true;
  return seq;
}

double masked_nll(const TrainingSequence& seq, const AutoregressiveScorer& scorer) {
  double nll = 0.0;
  bool any = false;
  const std::span<const TokenId> ids(seq.ids);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seq.loss_mask[i]) continue;
    any = true;
    const double p = scorer.probability(ids.first(i), ids[i]);
    nll -= std::log(p);
  }
  if (!any) throw Error(ErrorCode::EmptyText, "sequence has no text positions to score");
  return nll;
}

std::string sequence_to_json(const TrainingSequence& seq) {
  nlohmann::json j;
  j["ids"] = seq.ids;
  j["states"] = seq.states;
  std::vector<int> mask(seq.loss_mask.begin(), seq.loss_mask.end());
  j["mask"] = mask;
  j["data_len"] = seq.data_len;
  return j.dump();
}

TrainingSequence sequence_from_json(std::string_view line) {
  TrainingSequence seq;
  try {
    const auto j = nlohmann::json::parse(line);
    seq.ids = j.at("ids").get<TokenSeq>();
    seq.states = j.at("states").get<TokenSeq>();
    for (int m : j.at("mask").get<std::vector<int>>()) seq.loss_mask.push_back(m != 0);
    seq.data_len = j.at("data_len").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("sequence record: ") + e.what());
  }
  if (seq.states.size() != seq.ids.size() || seq.loss_mask.size() != seq.ids.size()) {
    throw Error(ErrorCode::BadFormat, "sequence record arrays differ in length");
  }
  seq.positions.resize(seq.ids.size());
  for (std::size_t i = 0; i < seq.ids.size(); ++i) seq.positions[i] = i;
  return seq;
}

}  // namespace d2t
