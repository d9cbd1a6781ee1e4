#include "d2t/ngram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "d2t/error.hpp"
#include "d2t/numfmt.hpp"
#include "d2t/strings.hpp"

namespace d2t {

std::vector<double> default_interpolation_weights(std::size_t order) {
  std::vector<double> w;
  const double total = static_cast<double>(order * (order + 1) / 2);
  for (std::size_t k = order; k >= 1; --k) w.push_back(static_cast<double>(k) / total);
  return w;
}

NgramScorer::NgramScorer(std::size_t vocab_size, const NgramOptions& opts)
    : vocab_size_(vocab_size), smoothing_(opts.smoothing) {
  if (opts.order < 1) throw Error(ErrorCode::BadFormat, "n-gram order must be at least 1");
  if (!(opts.smoothing > 0.0)) throw Error(ErrorCode::BadFormat, "smoothing must be positive");
  if (vocab_size == 0) throw Error(ErrorCode::BadFormat, "empty vocabulary");
  weights_ = opts.weights.empty() ? default_interpolation_weights(opts.order) : opts.weights;
  if (weights_.size() != opts.order) throw Error(ErrorCode::BadFormat, "need one weight per order");
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  for (double w : weights_) {
    if (w < 0.0) throw Error(ErrorCode::BadFormat, "negative interpolation weight");
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::BadFormat, "interpolation weights must sum to 1");
  tables_.resize(opts.order);
}

void NgramScorer::add_sequence(std::span<const TokenId> ids, const std::vector<bool>& mask) {
  if (!mask.empty() && mask.size() != ids.size()) throw Error(ErrorCode::BadFormat, "mask length differs from ids");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= vocab_size_) throw Error(ErrorCode::InvalidId, "token id outside vocabulary");
    if (!mask.empty() && !mask[i]) continue;
    for (std::size_t k = 0; k < tables_.size() && k <= i; ++k) {
      ContextCounts& c = tables_[k][TokenSeq(ids.begin() + static_cast<std::ptrdiff_t>(i - k),
                                             ids.begin() + static_cast<std::ptrdiff_t>(i))];
      ++c.next[ids[i]];
      ++c.total;
    }
  }
}

// Calls visit(weight, counts) for each order that contributes, highest first.
template <typename Visit>
void NgramScorer::mix(std::span<const TokenId> prefix, Visit&& visit) const {
  double carry = 0.0;
  const std::size_t n = tables_.size();
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t k = n - 1 - idx;  // context length
    const double w = weights_[idx] + carry;
    const ContextCounts* counts = nullptr;
    if (k <= prefix.size()) {
      TokenSeq ctx(prefix.end() - static_cast<std::ptrdiff_t>(k), prefix.end());
      auto it = tables_[k].find(ctx);
      if (it != tables_[k].end()) counts = &it->second;
    }
    if (counts || k == 0) {
      visit(w, counts);
      carry = 0.0;
    } else {
      carry = w;
    }
  }
}

std::vector<double> NgramScorer::next_distribution(std::span<const TokenId> prefix) const {
  std::vector<double> dist(vocab_size_, 0.0);
  const double v = static_cast<double>(vocab_size_);
  mix(prefix, [&](double w, const ContextCounts* c) {
    const double total = c ? static_cast<double>(c->total) : 0.0;
    const double denom = total + smoothing_ * v;
    const double base = w * smoothing_ / denom;
    for (double& p : dist) p += base;
    if (c) {
      for (const auto& [tok, count] : c->next) dist[tok] += w * static_cast<double>(count) / denom;
    }
  });
  return dist;
}

double NgramScorer::probability(std::span<const TokenId> prefix, TokenId next) const {
  if (next >= vocab_size_) throw Error(ErrorCode::InvalidId, "token id outside vocabulary");
  double p = 0.0;
  const double v = static_cast<double>(vocab_size_);
  mix(prefix, [&](double w, const ContextCounts* c) {
    const double total = c ? static_cast<double>(c->total) : 0.0;
    double count = 0.0;
    if (c) {
      auto it = c->next.find(next);
      if (it != c->next.end()) count = static_cast<double>(it->second);
    }
    p += w * (count + smoothing_) / (total + smoothing_ * v);
  });
  return p;
}

// ---------------------------------------------------------------- file format
//
//   #d2t-ngram v1
//   vocab <V>
//   smoothing <s>
//   weights <w_highest> ... <w_unigram>
//   table <k> <contexts>
//   <ctx ids or -> | <tok>:<count> ...

std::string NgramScorer::to_text() const {
  std::ostringstream out;
  out << "#d2t-ngram v1\n";
  out << "vocab " << vocab_size_ << "\n";
  out << "smoothing " << format_double(smoothing_) << "\n";
  out << "weights";
  for (double w : weights_) out << " " << format_double(w);
  out << "\n";
  for (std::size_t k = 0; k < tables_.size(); ++k) {
    out << "table " << k << " " << tables_[k].size() << "\n";
    for (const auto& [ctx, counts] : tables_[k]) {
      if (ctx.empty()) out << "-";
      for (std::size_t i = 0; i < ctx.size(); ++i) out << (i ? " " : "") << ctx[i];
      out << " |";
      for (const auto& [tok, c] : counts.next) out << " " << tok << ":" << c;
      out << "\n";
    }
  }
  return out.str();
}

namespace {

std::string expect_line(std::istream& in, std::string_view keyword) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(std::string(keyword) + " ", 0) != 0) {
    throw Error(ErrorCode::BadFormat, "expected '" + std::string(keyword) + "' in n-gram model");
  }
  return line.substr(keyword.size() + 1);
}

std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::BadFormat, "not an integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

NgramScorer NgramScorer::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "#d2t-ngram v1") throw Error(ErrorCode::BadFormat, "missing n-gram header");
  const auto vocab = parse_uint(expect_line(in, "vocab"));
  NgramOptions opts;
  opts.smoothing = parse_double(expect_line(in, "smoothing"));
  for (const auto& w : strings::split_whitespace(expect_line(in, "weights"))) opts.weights.push_back(parse_double(w));
  opts.order = opts.weights.size();
  NgramScorer model(vocab, opts);
  for (std::size_t k = 0; k < opts.order; ++k) {
    const auto header = strings::split_whitespace(expect_line(in, "table"));
    if (header.size() != 2 || parse_uint(header[0]) != k) throw Error(ErrorCode::BadFormat, "bad table header");
    const auto n = parse_uint(header[1]);
    for (std::uint64_t c = 0; c < n; ++c) {
      if (!std::getline(in, line)) throw Error(ErrorCode::BadFormat, "truncated n-gram table");
      const auto fields = strings::split_whitespace(line);
      auto bar = std::find(fields.begin(), fields.end(), "|");
      if (bar == fields.end()) throw Error(ErrorCode::BadFormat, "context line without '|'");
      TokenSeq ctx;
      for (auto it = fields.begin(); it != bar; ++it) {
        if (*it != "-") ctx.push_back(static_cast<TokenId>(parse_uint(*it)));
      }
      if (ctx.size() != k) throw Error(ErrorCode::BadFormat, "context length does not match table");
      ContextCounts& counts = model.tables_[k][ctx];
      for (auto it = bar + 1; it != fields.end(); ++it) {
        const auto colon = it->find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::BadFormat, "count entry without ':'");
        const auto tok = static_cast<TokenId>(parse_uint(std::string_view(*it).substr(0, colon)));
        const auto cnt = static_cast<std::int64_t>(parse_uint(std::string_view(*it).substr(colon + 1)));
        if (tok >= vocab) throw Error(ErrorCode::BadFormat, "token id outside vocabulary");
        counts.next[tok] = cnt;
        counts.total += cnt;
      }
    }
  }
  return model;
}

void NgramScorer::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << to_text();
}

NgramScorer NgramScorer::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

NgramScorer train_ngram(const std::vector<TrainingSequence>& corpus, std::size_t vocab_size,
                        const NgramOptions& opts) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no training sequences");
  NgramScorer model(vocab_size, opts);
  for (const auto& seq : corpus) model.add_sequence(seq.ids, seq.loss_mask);
  return model;
}

}  // namespace d2t
