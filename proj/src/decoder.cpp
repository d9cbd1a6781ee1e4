#include "d2t/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "d2t/error.hpp"

namespace d2t {

double normalize_score(double logprob_sum, std::size_t n_tokens, double alpha) {
  const double base = n_tokens > 1 ? static_cast<double>(n_tokens - 1) : 1.0;
  return logprob_sum - alpha * std::log(base);
}

double beam_score(std::span<const double> probs, double alpha) {
  if (probs.empty()) throw Error(ErrorCode::EmptyProbList, "beam_score needs at least one probability");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::EmptyProbList, "probabilities must lie in (0, 1]");
    sum += std::log(p);
  }
  return normalize_score(sum, probs.size(), alpha);
}

bool candidate_before(const BeamCandidate& a, const BeamCandidate& b) {
  if (a.normalized_score != b.normalized_score) return a.normalized_score > b.normalized_score;
  return a.ids < b.ids;
}

namespace {

std::vector<double> checked_distribution(const AutoregressiveScorer& scorer, std::span<const TokenId> prefix) {
  std::vector<double> dist;
  try {
    dist = scorer.next_distribution(prefix);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ScorerFailure, e.what());
  }
  if (dist.size() != scorer.vocab_size()) {
    throw Error(ErrorCode::ScorerFailure, "distribution size " + std::to_string(dist.size()) +
                                              " != vocab size " + std::to_string(scorer.vocab_size()));
  }
  double total = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error(ErrorCode::ScorerFailure, "invalid probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw Error(ErrorCode::ScorerFailure, "distribution does not sum to 1");
  return dist;
}

}  // namespace

std::vector<BeamCandidate> beam_search(const TrainingSequence& prefix, const AutoregressiveScorer& scorer,
                                       TokenId eos, const DecodeConfig& cfg) {
  const std::size_t width = std::max<std::size_t>(1, cfg.beam_width);
  const std::size_t cap = cfg.max_text_tokens.value_or(2 * prefix.data_len + 64);

  std::vector<BeamCandidate> active{BeamCandidate{}};
  std::vector<BeamCandidate> finished;
  TokenSeq context = prefix.ids;
  std::size_t steps = 0;

  // Extending a candidate never raises its score (log-probabilities are
  // non-positive and the length penalty only grows), so once `width`
  // finished candidates all beat the best active one, search is over.
  auto settled = [&] {
    return finished.size() >= width && active.front().normalized_score < finished.back().normalized_score;
  };
  while (steps < cap && !active.empty() && !settled()) {
    std::vector<BeamCandidate> pool;
    for (const auto& cand : active) {
      context.resize(prefix.ids.size());
      context.insert(context.end(), cand.ids.begin(), cand.ids.end());
      const auto dist = checked_distribution(scorer, context);
      for (std::size_t tok = 0; tok < dist.size(); ++tok) {
        if (dist[tok] <= 0.0) continue;
        BeamCandidate next;
        next.ids = cand.ids;
        next.ids.push_back(static_cast<TokenId>(tok));
        next.text_logprob_sum = cand.text_logprob_sum + std::log(dist[tok]);
        next.normalized_score = normalize_score(next.text_logprob_sum, next.ids.size(), cfg.alpha);
        next.complete = tok == eos;
        pool.push_back(std::move(next));
      }
    }
    std::sort(pool.begin(), pool.end(), candidate_before);

    // Finished hypotheses are set aside only if they rank inside the beam;
    // the remaining slots go to the best unfinished ones.
    std::vector<BeamCandidate> next_active;
    for (std::size_t rank = 0; rank < pool.size(); ++rank) {
      if (pool[rank].complete) {
        if (rank < width) finished.push_back(std::move(pool[rank]));
      } else if (next_active.size() < width) {
        next_active.push_back(std::move(pool[rank]));
      }
      if (rank + 1 >= width && next_active.size() >= width) break;
    }
    std::sort(finished.begin(), finished.end(), candidate_before);
    if (finished.size() > width) finished.resize(width);
    active = std::move(next_active);
    ++steps;
  }

  if (steps >= cap && !settled()) {
    for (auto& cand : active) {
      cand.complete = true;
      cand.forced = true;
      finished.push_back(std::move(cand));
    }
  }
  if (finished.empty()) throw Error(ErrorCode::ScorerFailure, "beam search produced no candidate");
  std::sort(finished.begin(), finished.end(), candidate_before);
  if (finished.size() > width) finished.resize(width);
  return finished;
}

std::string candidate_text(const BeamCandidate& c, const BpeVocab& vocab, TokenId eos) {
  std::span<const TokenId> ids(c.ids);
  if (!ids.empty() && ids.back() == eos) ids = ids.first(ids.size() - 1);
  return decode(vocab, ids);
}

std::vector<RankedCandidate> rerank(const std::vector<BeamCandidate>& candidates, const LinearizedData& data,
                                    const FidelityClassifier& clf, const BpeVocab& vocab) {
  const auto eos = vocab.special_id(kEosToken);
  std::vector<RankedCandidate> ranked;
  ranked.reserve(candidates.size());
  for (const auto& c : candidates) {
    RankedCandidate r{c, eos ? candidate_text(c, vocab, *eos) : decode(vocab, c.ids), Label::Accurate};
    r.label = clf.classify(data, r.text);
    ranked.push_back(std::move(r));
  }
  std::stable_partition(ranked.begin(), ranked.end(),
                        [](const RankedCandidate& r) { return r.label == Label::Accurate; });
  return ranked;
}

GenerateResult generate(const MeaningRepresentation& mr, const AutoregressiveScorer& scorer,
                        const FidelityClassifier* clf, const BpeVocab& vocab, const SpecialTokenRegistry& reg,
                        const GenerateOptions& opts) {
  const auto eos = vocab.special_id(kEosToken);
  if (!eos) throw Error(ErrorCode::MissingSpecial, "vocabulary lacks " + std::string(kEosToken));
  const LinearizedData lin = linearize(mr, reg, opts.linearize);
  const TrainingSequence prefix = build_sequence(lin, std::nullopt, vocab);
  const auto beam = beam_search(prefix, scorer, *eos, opts.decode);

  GenerateResult result;
  if (clf) {
    result.candidates = rerank(beam, lin, *clf, vocab);
    if (!opts.rerank) {
      // Labels are still reported; restore beam order.
      std::stable_sort(result.candidates.begin(), result.candidates.end(),
                       [](const RankedCandidate& a, const RankedCandidate& b) {
                         return candidate_before(a.candidate, b.candidate);
                       });
    }
    result.top_label = result.candidates.front().label;
  } else {
    for (const auto& c : beam) result.candidates.push_back({c, candidate_text(c, vocab, *eos), Label::Accurate});
  }
  result.text = result.candidates.front().text;
  return result;
}

}  // namespace d2t
