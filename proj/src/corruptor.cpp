#include "d2t/corruptor.hpp"

#include <algorithm>

#include "d2t/error.hpp"
#include "d2t/kernels.hpp"
#include "d2t/linearizer.hpp"
#include "d2t/strings.hpp"

namespace d2t {

namespace {

constexpr int kMaxDraws = 10;

// The constructed sentence list must survive a re-split, otherwise the
// output would not carry the structure its label claims.
std::optional<std::string> if_stable(const std::vector<std::string>& sentences) {
  std::string joined = strings::join(sentences, " ");
  if (split_sentences(joined).sentences != sentences) return std::nullopt;
  return joined;
}

std::vector<std::string> distinct_values(const MeaningRepresentation& data) {
  std::vector<std::string> out;
  for (auto& v : extract_values(data)) {
    if (!v.empty() && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<std::string> insert_sentence(std::vector<std::string> sentences, std::string sentence,
                                         std::size_t before) {
  before = std::min(before, sentences.size());
  sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(before), std::move(sentence));
  return sentences;
}

std::optional<std::string> make_omission(std::string_view text) {
  auto sentences = split_sentences(text).sentences;
  if (sentences.size() < 2) return std::nullopt;
  std::size_t shortest = 0;
  for (std::size_t k = 1; k < sentences.size(); ++k) {
    if (sentences[k].size() < sentences[shortest].size()) shortest = k;
  }
  sentences.erase(sentences.begin() + static_cast<std::ptrdiff_t>(shortest));
  return if_stable(sentences);
}

std::optional<std::string> make_repetition(std::string_view text, Rng& rng) {
  const auto sentences = split_sentences(text).sentences;
  const std::size_t n = sentences.size();
  if (n < 2) return std::nullopt;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    const std::size_t copy = rng.uniform(n);
    std::size_t before = rng.uniform(n - 1);
    if (before >= copy) ++before;
    if (auto out = if_stable(insert_sentence(sentences, sentences[copy], before))) return out;
  }
  return std::nullopt;
}

std::optional<std::string> make_hallucination(std::string_view text, Rng& rng,
                                              const std::vector<std::string>& corpus, std::size_t self) {
  if (corpus.size() < 2) throw Error(ErrorCode::CorpusTooSmall, "hallucination needs at least two records");
  const auto split = split_sentences(text);
  const auto& sentences = split.sentences;
  if (sentences.empty()) return std::nullopt;
  const std::string normalized = split.joined();
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    std::size_t other = rng.uniform(corpus.size() - 1);
    if (other >= self) ++other;
    const auto foreign = split_sentences(corpus[other]).sentences;
    if (foreign.empty()) continue;
    const std::string& pick = foreign[rng.uniform(foreign.size())];
    if (normalized.find(pick) != std::string::npos) continue;
    const std::size_t before = rng.uniform(sentences.size());
    if (auto out = if_stable(insert_sentence(sentences, pick, before))) return out;
  }
  return std::nullopt;
}

std::optional<std::string> apply_value_error(std::string_view text, std::string_view value,
                                             std::string_view replacement) {
  const std::size_t at = strings::find_bounded(text, value, 0);
  if (at == std::string_view::npos) return std::nullopt;
  std::string out(text.substr(0, at));
  out += replacement;
  out += text.substr(at + value.size());
  return out;
}

std::optional<std::string> make_value_error(const MeaningRepresentation& data, std::string_view text,
                                            Rng& rng) {
  const auto values = distinct_values(data);
  if (values.size() < 2) return std::nullopt;
  const std::string normalized = strings::normalize_space(text);
  std::vector<std::size_t> present;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (strings::find_bounded(normalized, values[k], 0) != std::string_view::npos) present.push_back(k);
  }
  if (present.empty()) return std::nullopt;
  const std::size_t x = present[rng.uniform(present.size())];
  std::size_t y = rng.uniform(values.size() - 1);
  if (y >= x) ++y;
  return apply_value_error(normalized, values[x], values[y]);
}

std::vector<CorruptionExample> generate_sfc_corpus(const std::vector<SourceRecord>& records,
                                                   std::uint64_t seed, const CorruptOptions& opts) {
  std::vector<std::string> texts;
  texts.reserve(records.size());
  for (const auto& r : records) texts.push_back(r.text);

  std::vector<std::vector<CorruptionExample>> per_record(records.size());
  kernels::for_each_index(opts.parallel, records.size(), [&](std::size_t i) {
    const SourceRecord& rec = records[i];
    const std::uint64_t sub_seed = derive_seed(seed, rec.id);
    Rng rng(sub_seed);
    auto& out = per_record[i];
    auto emit = [&](Label label, std::optional<std::string> text) {
      if (text) out.push_back({rec.data, std::move(*text), label, rec.id, sub_seed});
    };
    emit(Label::Accurate, rec.text);
    emit(Label::Omission, make_omission(rec.text));
    for (std::size_t round = 0; round < std::max<std::size_t>(1, opts.repeat_count); ++round) {
      emit(Label::Repetition, make_repetition(rec.text, rng));
      if (texts.size() >= 2) emit(Label::Hallucination, make_hallucination(rec.text, rng, texts, i));
      emit(Label::ValueError, make_value_error(rec.data, rec.text, rng));
    }
  });

  std::vector<CorruptionExample> all;
  for (auto& group : per_record) {
    for (auto& ex : group) all.push_back(std::move(ex));
  }
  return all;
}

}  // namespace d2t
