#pragma once

// Byte-level byte-pair encoding. The 256 single-byte tokens are always in the
// vocabulary, so every byte string encodes without unknown tokens.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace d2t {

using TokenId = std::uint32_t;
using TokenSeq = std::vector<TokenId>;

struct BpeMerge {
  TokenId left;
  TokenId right;
  TokenId result;

  bool operator==(const BpeMerge&) const = default;
};

/// Token ids: 0..255 are bytes, then the reserved specials in declaration
/// order, then tokens introduced by merges. A merge whose byte string already
/// names a token reuses that id, keeping the token/id map bijective.
class BpeVocab {
 public:
  static constexpr TokenId kByteTokens = 256;

  explicit BpeVocab(std::vector<std::string> specials = {});

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& specials() const { return specials_; }
  const std::vector<BpeMerge>& merges() const { return merges_; }

  const std::string& token_bytes(TokenId id) const;
  std::optional<TokenId> find(std::string_view bytes) const;
  std::optional<TokenId> special_id(std::string_view special) const;
  bool is_special(TokenId id) const {
    return id >= kByteTokens && id < kByteTokens + specials_.size();
  }
  /// Rank of the merge for (left, right), if any; lower ranks apply first.
  std::optional<std::size_t> merge_rank(TokenId left, TokenId right) const;

  /// Appends a merge rule and returns the id of its result.
  TokenId add_merge(TokenId left, TokenId right);

  std::string to_text() const;
  static BpeVocab from_text(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static BpeVocab load(const std::filesystem::path& path);

  bool operator==(const BpeVocab& other) const {
    return specials_ == other.specials_ && merges_ == other.merges_;
  }

 private:
  std::vector<std::string> specials_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> by_bytes_;
  std::vector<BpeMerge> merges_;
  std::unordered_map<std::uint64_t, std::size_t> rank_;
};

/// Pieces of a text: either a reserved special (matched greedily, longest
/// first, left to right) or a run of ordinary bytes.
struct TextPiece {
  std::string_view bytes;
  std::optional<TokenId> special;
};
std::vector<TextPiece> split_specials(const BpeVocab& vocab, std::string_view text);

/// Greedy highest-count pair merging until `target_vocab_size` is reached or
/// no pair occurs at least twice. Count ties go to the lexicographically
/// smaller (left bytes, right bytes) pair.
BpeVocab train_bpe(const std::vector<std::string>& corpus, std::size_t target_vocab_size,
                   const std::vector<std::string>& specials, bool parallel = false);

TokenSeq encode(const BpeVocab& vocab, std::string_view text);
std::string decode(const BpeVocab& vocab, std::span<const TokenId> ids);

inline std::uint64_t pair_key(TokenId left, TokenId right) {
  return (static_cast<std::uint64_t>(left) << 32) | right;
}

}  // namespace d2t
