#include "d2t/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "d2t/error.hpp"
#include "d2t/kernels.hpp"
#include "d2t/linearizer.hpp"
#include "d2t/sentence.hpp"
#include "d2t/strings.hpp"

namespace d2t {

std::vector<std::string> metric_tokens(std::string_view text) {
  std::string spaced;
  spaced.reserve(text.size() * 2);
  for (char c : text) {
    if (strings::is_punct(c)) {
      spaced += ' ';
      spaced += c;
      spaced += ' ';
    } else {
      spaced += strings::to_lower(c);
    }
  }
  return strings::split_whitespace(spaced);
}

namespace {

constexpr std::size_t kMaxN = 4;

using NgramCounts = std::map<std::vector<std::string>, double>;

NgramCounts ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
  NgramCounts out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    out[std::vector<std::string>(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                 toks.begin() + static_cast<std::ptrdiff_t>(i + n))] += 1.0;
  }
  return out;
}

void require_refs(const EvalPair& p) {
  if (p.references.empty()) throw Error(ErrorCode::MissingData, "pair '" + p.id + "' has no references");
}

struct BleuStats {
  std::array<double, kMaxN> matched{};
  std::array<double, kMaxN> total{};
  double hyp_len = 0.0;
  double ref_len = 0.0;
};

BleuStats bleu_stats(const EvalPair& p) {
  require_refs(p);
  BleuStats s;
  const auto hyp = metric_tokens(p.hypothesis);
  std::vector<std::vector<std::string>> refs;
  for (const auto& r : p.references) refs.push_back(metric_tokens(r));
  s.hyp_len = static_cast<double>(hyp.size());
  // Closest reference length; ties go to the shorter one.
  std::size_t best = refs[0].size();
  for (const auto& r : refs) {
    const auto d = [&](std::size_t len) { return len > hyp.size() ? len - hyp.size() : hyp.size() - len; };
    if (d(r.size()) < d(best) || (d(r.size()) == d(best) && r.size() < best)) best = r.size();
  }
  s.ref_len = static_cast<double>(best);
  for (std::size_t n = 1; n <= kMaxN; ++n) {
    const auto h = ngram_counts(hyp, n);
    NgramCounts max_ref;
    for (const auto& r : refs) {
      for (const auto& [g, c] : ngram_counts(r, n)) max_ref[g] = std::max(max_ref[g], c);
    }
    for (const auto& [g, c] : h) {
      auto it = max_ref.find(g);
      s.matched[n - 1] += std::min(c, it == max_ref.end() ? 0.0 : it->second);
      s.total[n - 1] += c;
    }
  }
  return s;
}

}  // namespace

BleuDetail bleu_detail(const std::vector<EvalPair>& pairs, bool parallel) {
  if (pairs.empty()) throw Error(ErrorCode::EmptySet, "no pairs to score");
  std::vector<BleuStats> per(pairs.size());
  kernels::for_each_index(parallel, pairs.size(), [&](std::size_t i) { per[i] = bleu_stats(pairs[i]); });
  BleuStats sum;
  for (const auto& s : per) {
    for (std::size_t n = 0; n < kMaxN; ++n) {
      sum.matched[n] += s.matched[n];
      sum.total[n] += s.total[n];
    }
    sum.hyp_len += s.hyp_len;
    sum.ref_len += s.ref_len;
  }
  BleuDetail d;
  d.hyp_len = sum.hyp_len;
  d.ref_len = sum.ref_len;
  bool zero = false;
  double log_p = 0.0;
  for (std::size_t n = 0; n < kMaxN; ++n) {
    d.precision[n] = sum.total[n] > 0.0 ? sum.matched[n] / sum.total[n] : 0.0;
    if (d.precision[n] == 0.0) zero = true;
    else log_p += std::log(d.precision[n]) / static_cast<double>(kMaxN);
  }
  if (sum.hyp_len < sum.ref_len) {
    d.brevity_penalty = sum.hyp_len > 0.0 ? std::exp(1.0 - sum.ref_len / sum.hyp_len) : 0.0;
  }
  d.score = zero ? 0.0 : 100.0 * d.brevity_penalty * std::exp(log_p);
  return d;
}

double bleu(const std::vector<EvalPair>& pairs, bool parallel) { return bleu_detail(pairs, parallel).score; }

double lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]);
}

double rouge_l(const std::vector<EvalPair>& pairs, bool parallel) {
  if (pairs.empty()) throw Error(ErrorCode::EmptySet, "no pairs to score");
  constexpr double kBeta = 1.2;
  std::vector<double> f(pairs.size(), 0.0);
  kernels::for_each_index(parallel, pairs.size(), [&](std::size_t i) {
    require_refs(pairs[i]);
    const auto hyp = metric_tokens(pairs[i].hypothesis);
    double p = 0.0, r = 0.0;
    for (const auto& ref_text : pairs[i].references) {
      const auto ref = metric_tokens(ref_text);
      const double l = lcs_length(hyp, ref);
      if (!hyp.empty()) p = std::max(p, l / static_cast<double>(hyp.size()));
      if (!ref.empty()) r = std::max(r, l / static_cast<double>(ref.size()));
    }
    if (p > 0.0 && r > 0.0) f[i] = (1.0 + kBeta * kBeta) * p * r / (r + kBeta * kBeta * p);
  });
  double total = 0.0;
  for (double v : f) total += v;
  return total / static_cast<double>(pairs.size());
}

namespace {

struct TfIdf {
  std::array<std::map<std::vector<std::string>, double>, kMaxN> vec;
  std::array<double, kMaxN> norm{};
};

TfIdf tfidf(const std::vector<std::string>& toks, const std::array<NgramCounts, kMaxN>& df, double log_n) {
  TfIdf out;
  for (std::size_t n = 1; n <= kMaxN; ++n) {
    for (const auto& [g, tf] : ngram_counts(toks, n)) {
      auto it = df[n - 1].find(g);
      const double d = it == df[n - 1].end() ? 1.0 : std::max(1.0, it->second);
      const double w = tf * (log_n - std::log(d));
      out.vec[n - 1][g] = w;
      out.norm[n - 1] += w * w;
    }
    out.norm[n - 1] = std::sqrt(out.norm[n - 1]);
  }
  return out;
}

}  // namespace

double cider(const std::vector<EvalPair>& pairs, bool parallel) {
  if (pairs.empty()) throw Error(ErrorCode::EmptySet, "no pairs to score");
  std::vector<std::vector<std::vector<std::string>>> refs(pairs.size());
  std::array<NgramCounts, kMaxN> df;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    require_refs(pairs[i]);
    std::array<std::set<std::vector<std::string>>, kMaxN> present;
    for (const auto& r : pairs[i].references) {
      refs[i].push_back(metric_tokens(r));
      for (std::size_t n = 1; n <= kMaxN; ++n) {
        for (const auto& entry : ngram_counts(refs[i].back(), n)) present[n - 1].insert(entry.first);
      }
    }
    for (std::size_t n = 0; n < kMaxN; ++n) {
      for (const auto& g : present[n]) df[n][g] += 1.0;
    }
  }
  const double log_n = std::log(static_cast<double>(pairs.size()));

  std::vector<double> score(pairs.size(), 0.0);
  kernels::for_each_index(parallel, pairs.size(), [&](std::size_t i) {
    const TfIdf h = tfidf(metric_tokens(pairs[i].hypothesis), df, log_n);
    std::array<double, kMaxN> sim{};
    for (const auto& ref : refs[i]) {
      const TfIdf r = tfidf(ref, df, log_n);
      for (std::size_t n = 0; n < kMaxN; ++n) {
        if (h.norm[n] == 0.0 || r.norm[n] == 0.0) continue;
        double dot = 0.0;
        for (const auto& [g, w] : h.vec[n]) {
          auto it = r.vec[n].find(g);
          if (it != r.vec[n].end()) dot += w * it->second;
        }
        sim[n] += dot / (h.norm[n] * r.norm[n]);
      }
    }
    double mean = 0.0;
    for (double s : sim) mean += s;
    mean /= static_cast<double>(kMaxN);
    score[i] = 10.0 * mean / static_cast<double>(refs[i].size());
  });
  double total = 0.0;
  for (double s : score) total += s;
  return total / static_cast<double>(pairs.size());
}

RealizationTable load_realization_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  RealizationTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    auto& variants = table[fields[0]];
    for (std::size_t k = 1; k < fields.size(); ++k) {
      if (!fields[k].empty()) variants.push_back(fields[k]);
    }
  }
  return table;
}

SerResult slot_error_rate(const std::vector<EvalPair>& pairs, const RealizationTable& table) {
  SerResult out;
  for (const auto& p : pairs) {
    if (!p.data) throw Error(ErrorCode::MissingData, "pair '" + p.id + "' has no data");
    std::map<std::string, std::size_t> multiplicity;
    std::vector<std::string> order;
    for (auto& v : extract_values(*p.data)) {
      if (v.empty()) continue;
      if (multiplicity[v]++ == 0) order.push_back(v);
    }
    std::size_t errors = 0;
    for (const auto& v : order) {
      std::size_t k = strings::count_bounded(p.hypothesis, v);
      if (auto it = table.find(v); it != table.end()) {
        for (const auto& variant : it->second) {
          if (variant != v) k += strings::count_bounded(p.hypothesis, variant);
        }
      }
      if (k == 0) {
        ++out.missed;
        ++errors;
      } else if (k > multiplicity[v]) {
        ++out.extra;
        ++errors;
      }
    }
    out.total += order.size();
    out.accurate.push_back(errors == 0);
  }
  out.ser = out.total ? static_cast<double>(out.missed + out.extra) / static_cast<double>(out.total) : 0.0;
  return out;
}

double accurate_fraction(const std::vector<bool>& labels) {
  if (labels.empty()) throw Error(ErrorCode::EmptySet, "no labels");
  return static_cast<double>(std::count(labels.begin(), labels.end(), true)) / static_cast<double>(labels.size());
}

double hsa(const SerResult& r) { return accurate_fraction(r.accurate); }

double dsa(const std::vector<Label>& labels) {
  std::vector<bool> acc;
  acc.reserve(labels.size());
  for (Label l : labels) acc.push_back(l == Label::Accurate);
  return accurate_fraction(acc);
}

double label_agreement(const std::map<std::string, bool>& manual, const std::map<std::string, bool>& automatic) {
  if (manual.size() != automatic.size()) throw Error(ErrorCode::IdMismatch, "label sets cover different ids");
  if (manual.empty()) throw Error(ErrorCode::EmptySet, "no labels");
  std::size_t agree = 0;
  for (const auto& [id, label] : manual) {
    auto it = automatic.find(id);
    if (it == automatic.end()) throw Error(ErrorCode::IdMismatch, "id '" + id + "' has no automatic label");
    agree += it->second == label;
  }
  return static_cast<double>(agree) / static_cast<double>(manual.size());
}

WordSet load_easy_words(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = strings::trim(line);
    if (!w.empty()) words.insert(strings::lower(w));
  }
  return words;
}

double dale_chall_formula(double pct_difficult, double avg_sentence_length) {
  double score = 0.1579 * pct_difficult + 0.0496 * avg_sentence_length;
  if (pct_difficult > 5.0) score += 3.6365;
  return score;
}

namespace {

std::string strip_edges(std::string_view w) {
  std::size_t b = 0, e = w.size();
  while (b < e && strings::is_punct(w[b])) ++b;
  while (e > b && strings::is_punct(w[e - 1])) --e;
  return std::string(w.substr(b, e - b));
}

bool all_digits(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return strings::is_digit(c); });
}

}  // namespace

double dale_chall(const std::vector<std::string>& corpus, const WordSet& easy_words, const DaleChallOptions& opts) {
  std::size_t words = 0, difficult = 0, sentences = 0;
  for (const auto& doc : corpus) {
    if (strings::trim(doc).empty()) continue;
    sentences += split_sentences(doc).sentences.size();
    for (const auto& raw : strings::split_whitespace(doc)) {
      const std::string w = strings::lower(strip_edges(raw));
      if (w.empty()) continue;
      ++words;
      if (!all_digits(w) && !easy_words.count(w) && !opts.extra_easy.count(w)) ++difficult;
    }
  }
  if (words == 0 || sentences == 0) throw Error(ErrorCode::EmptyCorpus, "no words to score");
  const double pdw = 100.0 * static_cast<double>(difficult) / static_cast<double>(words);
  const double asl = static_cast<double>(words) / static_cast<double>(sentences);
  return dale_chall_formula(pdw, asl);
}

CorpusStats corpus_stats(const std::vector<std::string>& corpus, CapitalBasis basis) {
  std::set<std::string> unique;
  std::size_t tokens = 0, capital_tokens = 0;
  for (const auto& doc : corpus) {
    for (const auto& raw : strings::split_whitespace(doc)) {
      std::string w = strip_edges(raw);
      if (w.empty()) continue;
      ++tokens;
      capital_tokens += strings::is_upper(w[0]);
      unique.insert(std::move(w));
    }
  }
  CorpusStats s;
  s.unique_words = unique.size();
  if (basis == CapitalBasis::UniqueWords) {
    const auto caps = std::count_if(unique.begin(), unique.end(), [](const std::string& w) { return strings::is_upper(w[0]); });
    s.pct_capitalized = unique.empty() ? 0.0 : 100.0 * static_cast<double>(caps) / static_cast<double>(unique.size());
  } else {
    s.pct_capitalized = tokens ? 100.0 * static_cast<double>(capital_tokens) / static_cast<double>(tokens) : 0.0;
  }
  return s;
}

}  // namespace d2t
