#include "d2t/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "d2t/error.hpp"
#include "d2t/kernels.hpp"

namespace d2t {

BpeVocab::BpeVocab(std::vector<std::string> specials) : specials_(std::move(specials)) {
  tokens_.reserve(kByteTokens + specials_.size());
  for (unsigned b = 0; b < kByteTokens; ++b) {
    tokens_.emplace_back(1, static_cast<char>(b));
    by_bytes_.emplace(tokens_.back(), static_cast<TokenId>(b));
  }
  for (const auto& s : specials_) {
    if (s.size() < 2) throw Error(ErrorCode::BadFormat, "special token too short: '" + s + "'");
    if (!by_bytes_.emplace(s, static_cast<TokenId>(tokens_.size())).second) {
      throw Error(ErrorCode::DuplicateToken, "special token listed twice: " + s);
    }
    tokens_.push_back(s);
  }
}

const std::string& BpeVocab::token_bytes(TokenId id) const {
  if (id >= tokens_.size()) throw Error(ErrorCode::InvalidId, "token id " + std::to_string(id));
  return tokens_[id];
}

std::optional<TokenId> BpeVocab::find(std::string_view bytes) const {
  auto it = by_bytes_.find(std::string(bytes));
  if (it == by_bytes_.end()) return std::nullopt;
  return it->second;
}

std::optional<TokenId> BpeVocab::special_id(std::string_view special) const {
  auto id = find(special);
  if (id && is_special(*id)) return id;
  return std::nullopt;
}

std::optional<std::size_t> BpeVocab::merge_rank(TokenId left, TokenId right) const {
  auto it = rank_.find(pair_key(left, right));
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

TokenId BpeVocab::add_merge(TokenId left, TokenId right) {
  if (is_special(left) || is_special(right)) {
    throw Error(ErrorCode::InvalidId, "special tokens never take part in merges");
  }
  std::string bytes = token_bytes(left) + token_bytes(right);
  TokenId result;
  if (auto existing = by_bytes_.find(bytes); existing != by_bytes_.end()) {
    result = existing->second;
  } else {
    result = static_cast<TokenId>(tokens_.size());
    by_bytes_.emplace(bytes, result);
    tokens_.push_back(std::move(bytes));
  }
  if (!rank_.emplace(pair_key(left, right), merges_.size()).second) {
    throw Error(ErrorCode::BadFormat, "merge listed twice");
  }
  merges_.push_back({left, right, result});
  return result;
}

// ---------------------------------------------------------------- file format
//
//   #d2t-bpe v1
//   specials <n>
//   <token>            (one per line)
//   merges <m>
//   <left> <right>     (application order)
//
// Token bytes outside 0x21..0x7e, and the backslash, are written as \xHH.

namespace {

std::string escape_bytes(std::string_view s) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u > 0x20 && u < 0x7f && c != '\\') {
      out += c;
    } else {
      out += "\\x";
      out += hex[u >> 4];
      out += hex[u & 0xf];
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string unescape_bytes(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (s.size() < i + 4 || s[i + 1] != 'x') throw Error(ErrorCode::BadFormat, "bad escape in vocab file");
    int hi = hex_value(s[i + 2]);
    int lo = hex_value(s[i + 3]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::BadFormat, "bad hex escape in vocab file");
    out += static_cast<char>(hi * 16 + lo);
    i += 3;
  }
  return out;
}

std::size_t read_count(std::istream& in, std::string_view keyword) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(std::string(keyword) + " ", 0) != 0) {
    throw Error(ErrorCode::BadFormat, "expected '" + std::string(keyword) + " <n>' in vocab file");
  }
  return std::stoul(line.substr(keyword.size() + 1));
}

}  // namespace

std::string BpeVocab::to_text() const {
  std::ostringstream out;
  out << "#d2t-bpe v1\n";
  out << "specials " << specials_.size() << "\n";
  for (const auto& s : specials_) out << escape_bytes(s) << "\n";
  out << "merges " << merges_.size() << "\n";
  for (const auto& m : merges_) {
    out << escape_bytes(tokens_[m.left]) << " " << escape_bytes(tokens_[m.right]) << "\n";
  }
  return out.str();
}

BpeVocab BpeVocab::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "#d2t-bpe v1") {
    throw Error(ErrorCode::BadFormat, "missing vocab header");
  }
  std::vector<std::string> specials(read_count(in, "specials"));
  for (auto& s : specials) {
    if (!std::getline(in, line)) throw Error(ErrorCode::BadFormat, "truncated specials section");
    s = unescape_bytes(line);
  }
  BpeVocab vocab(std::move(specials));
  const std::size_t n_merges = read_count(in, "merges");
  for (std::size_t i = 0; i < n_merges; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorCode::BadFormat, "truncated merges section");
    auto sp = line.find(' ');
    if (sp == std::string::npos) throw Error(ErrorCode::BadFormat, "merge line without separator");
    auto left = vocab.find(unescape_bytes(line.substr(0, sp)));
    auto right = vocab.find(unescape_bytes(line.substr(sp + 1)));
    if (!left || !right) throw Error(ErrorCode::BadFormat, "merge refers to unknown token: " + line);
    vocab.add_merge(*left, *right);
  }
  return vocab;
}

void BpeVocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << to_text();
}

BpeVocab BpeVocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

// ---------------------------------------------------------------- encoding

std::vector<TextPiece> split_specials(const BpeVocab& vocab, std::string_view text) {
  std::vector<std::pair<std::string_view, TokenId>> specials;
  for (const auto& s : vocab.specials()) specials.emplace_back(s, *vocab.find(s));
  std::stable_sort(specials.begin(), specials.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });

  std::vector<TextPiece> pieces;
  std::size_t run_start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    std::optional<std::pair<std::string_view, TokenId>> hit;
    for (const auto& sp : specials) {
      if (text.compare(i, sp.first.size(), sp.first) == 0) {
        hit = sp;
        break;
      }
    }
    if (!hit) {
      ++i;
      continue;
    }
    if (i > run_start) pieces.push_back({text.substr(run_start, i - run_start), std::nullopt});
    pieces.push_back({text.substr(i, hit->first.size()), hit->second});
    i += hit->first.size();
    run_start = i;
  }
  if (run_start < text.size()) pieces.push_back({text.substr(run_start), std::nullopt});
  return pieces;
}

namespace {

// Repeatedly merges every occurrence of the lowest-ranked adjacent pair.
void apply_merges(const BpeVocab& vocab, TokenSeq& ids) {
  while (ids.size() > 1) {
    std::size_t best_rank = vocab.merges().size();
    for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
      if (auto r = vocab.merge_rank(ids[k], ids[k + 1]); r && *r < best_rank) best_rank = *r;
    }
    if (best_rank == vocab.merges().size()) return;
    const BpeMerge& m = vocab.merges()[best_rank];
    std::size_t w = 0;
    for (std::size_t k = 0; k < ids.size();) {
      if (k + 1 < ids.size() && ids[k] == m.left && ids[k + 1] == m.right) {
        ids[w++] = m.result;
        k += 2;
      } else {
        ids[w++] = ids[k++];
      }
    }
    ids.resize(w);
  }
}

}  // namespace

TokenSeq encode(const BpeVocab& vocab, std::string_view text) {
  TokenSeq out;
  for (const auto& piece : split_specials(vocab, text)) {
    if (piece.special) {
      out.push_back(*piece.special);
      continue;
    }
    TokenSeq ids;
    ids.reserve(piece.bytes.size());
    for (char c : piece.bytes) ids.push_back(static_cast<unsigned char>(c));
    apply_merges(vocab, ids);
    out.insert(out.end(), ids.begin(), ids.end());
  }
  return out;
}

std::string decode(const BpeVocab& vocab, std::span<const TokenId> ids) {
  std::string out;
  for (TokenId id : ids) out += vocab.token_bytes(id);
  return out;
}

// ---------------------------------------------------------------- training

BpeVocab train_bpe(const std::vector<std::string>& corpus, std::size_t target_vocab_size,
                   const std::vector<std::string>& specials, bool parallel) {
  BpeVocab vocab(specials);
  if (target_vocab_size < vocab.size()) {
    throw Error(ErrorCode::VocabTooSmall, "target " + std::to_string(target_vocab_size) + " < " +
                                              std::to_string(vocab.size()) + " reserved tokens");
  }

  // Identical byte runs are counted once with a weight.
  std::map<std::string, std::int64_t> run_counts;
  for (const auto& text : corpus) {
    for (const auto& piece : split_specials(vocab, text)) {
      if (!piece.special && piece.bytes.size() > 1) ++run_counts[std::string(piece.bytes)];
    }
  }
  std::vector<kernels::WeightedChunk> chunks;
  chunks.reserve(run_counts.size());
  for (const auto& [run, weight] : run_counts) {
    kernels::WeightedChunk c{{}, weight};
    for (char ch : run) c.ids.push_back(static_cast<unsigned char>(ch));
    chunks.push_back(std::move(c));
  }

  while (vocab.size() < target_vocab_size) {
    const kernels::PairCounts counts =
        parallel ? kernels::omp::count_pairs(chunks) : kernels::serial::count_pairs(chunks);
    std::uint64_t best = 0;
    std::int64_t best_count = 0;
    for (const auto& [key, count] : counts) {
      if (count < best_count) continue;
      if (count > best_count) {
        best = key;
        best_count = count;
        continue;
      }
      const auto l = static_cast<TokenId>(key >> 32), r = static_cast<TokenId>(key);
      const auto bl = static_cast<TokenId>(best >> 32), br = static_cast<TokenId>(best);
      const auto& lb = vocab.token_bytes(l);
      const auto& blb = vocab.token_bytes(bl);
      if (lb < blb || (lb == blb && vocab.token_bytes(r) < vocab.token_bytes(br))) best = key;
    }
    if (best_count < 2) break;

    const auto left = static_cast<TokenId>(best >> 32);
    const auto right = static_cast<TokenId>(best);
    const TokenId result = vocab.add_merge(left, right);
    for (auto& chunk : chunks) {
      auto& ids = chunk.ids;
      std::size_t w = 0;
      for (std::size_t k = 0; k < ids.size();) {
        if (k + 1 < ids.size() && ids[k] == left && ids[k + 1] == right) {
          ids[w++] = result;
          k += 2;
        } else {
          ids[w++] = ids[k++];
        }
      }
      ids.resize(w);
    }
  }
  return vocab;
}

}  // namespace d2t
