#include <doctest.h>

#include <cmath>

#include "d2t/sequence.hpp"
#include "error_code.hpp"
#include "fixtures.hpp"

using namespace d2t;
using namespace d2t::testing;

namespace {

BpeVocab byte_vocab() { return BpeVocab({"<data>", "<text>", "<eos>", "<subject>", "<predicate>", "<object>"}); }

LinearizedData webnlg() {
  return linearize(parse_mr(MrType::Triples, kWebnlgRaw), SpecialTokenRegistry::with_defaults());
}

// Probability table keyed by prefix length; everything else uniform.
class TableScorer final : public AutoregressiveScorer {
 public:
  TableScorer(std::size_t v, std::map<std::size_t, double> p) : v_(v), p_(std::move(p)) {}
  std::size_t vocab_size() const override { return v_; }
  std::vector<double> next_distribution(std::span<const TokenId>) const override {
    return std::vector<double>(v_, 1.0 / static_cast<double>(v_));
  }
  double probability(std::span<const TokenId> prefix, TokenId) const override {
    auto it = p_.find(prefix.size());
    return it == p_.end() ? 1.0 / static_cast<double>(v_) : it->second;
  }

 private:
  std::size_t v_;
  std::map<std::size_t, double> p_;
};

}  // namespace

TEST_SUITE("sequence") {
  TEST_CASE("layout and fine states on the triple example") {
    auto vocab = byte_vocab();
    auto seq = build_sequence(webnlg(), std::string(kWebnlgText), vocab);
    const TokenId data = 256, text = 257, eos = 258, subj = 259, pred = 260, obj = 261;

    // Hand-derived: each run is the special token followed by the bytes it governs.
    TokenSeq expected;
    auto run = [&](TokenId id, std::size_t n) { expected.insert(expected.end(), n, id); };
    run(data, 1);
    run(subj, 1 + 8);    // " Aarhus "
    run(pred, 1 + 13);   // " leader name "
    run(obj, 1 + 17);    // " Jacob Bundsgaard"
    run(text, 1 + 41);   // the reference sentence
    run(eos, 1);
    CHECK(seq.states == expected);
    CHECK(seq.data_len == 3 + 8 + 13 + 17);
    CHECK(seq.ids[seq.data_len + 1] == text);
    CHECK(seq.ids.back() == eos);
    for (std::size_t i = 0; i < seq.ids.size(); ++i) {
      CHECK(seq.positions[i] == i);
      CHECK(seq.loss_mask[i] == (i >= seq.data_len + 2));
    }
  }

  TEST_CASE("coarse states") {
    auto vocab = byte_vocab();
    auto seq = build_sequence(webnlg(), std::string(kWebnlgText), vocab, StateMode::Coarse);
    for (std::size_t i = 0; i < seq.ids.size(); ++i) {
      CHECK(seq.states[i] == (i <= seq.data_len ? 256u : 257u));
    }
  }

  TEST_CASE("generation prefix") {
    auto vocab = byte_vocab();
    auto seq = build_sequence(webnlg(), std::nullopt, vocab);
    CHECK(seq.ids.back() == 257u);
    CHECK(seq.ids.size() == seq.data_len + 2);
    CHECK(std::none_of(seq.loss_mask.begin(), seq.loss_mask.end(), [](bool b) { return b; }));
  }

  TEST_CASE("property: fine states name an earlier special") {
    auto vocab = byte_vocab();
    for (auto text : {kWebnlgText, kE2eText, std::string_view("")}) {
      auto seq = build_sequence(webnlg(), std::string(text), vocab);
      for (std::size_t i = 0; i < seq.ids.size(); ++i) {
        CHECK(vocab.is_special(seq.states[i]));
        bool found = false;
        for (std::size_t j = 0; j <= i; ++j) found = found || seq.ids[j] == seq.states[i];
        CHECK(found);
      }
    }
  }

  TEST_CASE("missing specials") {
    BpeVocab vocab({"<data>", "<text>", "<eos>"});
    CHECK(code_of([&] { build_sequence(webnlg(), std::string("x"), vocab); }) == ErrorCode::MissingSpecial);
    BpeVocab no_eos({"<data>", "<text>", "<subject>", "<predicate>", "<object>"});
    CHECK(build_sequence(webnlg(), std::nullopt, no_eos).ids.back() == 257u);
    CHECK(code_of([&] { build_sequence(webnlg(), std::string("x"), no_eos); }) == ErrorCode::MissingSpecial);
  }

  TEST_CASE("masked nll") {
    auto vocab = byte_vocab();
    auto seq = build_sequence(webnlg(), std::string("ab"), vocab);
    const std::size_t t0 = seq.text_start();
    // Three masked positions: 'a', 'b', <eos>.
    TableScorer perfect(vocab.size(), {{t0, 1.0}, {t0 + 1, 1.0}, {t0 + 2, 1.0}});
    CHECK(masked_nll(seq, perfect) == doctest::Approx(0.0));
    TableScorer uniform(vocab.size(), {});
    CHECK(masked_nll(seq, uniform) == doctest::Approx(3 * std::log(static_cast<double>(vocab.size()))));

    auto one = build_sequence(webnlg(), std::string("a"), vocab);
    TableScorer hand(vocab.size(), {{t0, 0.5}, {t0 + 1, 0.25}});
    CHECK(masked_nll(one, hand) == doctest::Approx(2.0794).epsilon(1e-4));

    auto prefix = build_sequence(webnlg(), std::nullopt, vocab);
    CHECK(code_of([&] { masked_nll(prefix, uniform); }) == ErrorCode::EmptyText);
  }

  TEST_CASE("json round trip") {
    auto vocab = byte_vocab();
    auto seq = build_sequence(webnlg(), std::string(kWebnlgText), vocab);
    CHECK(sequence_from_json(sequence_to_json(seq)) == seq);
    CHECK(code_of([] { sequence_from_json("{\"ids\":[1]}"); }) == ErrorCode::BadFormat);
    CHECK(code_of([] { sequence_from_json("{\"ids\":[1],\"states\":[],\"mask\":[0],\"data_len\":0}"); }) ==
          ErrorCode::BadFormat);
  }

  TEST_CASE("state mode names") {
    CHECK(parse_state_mode("fine") == StateMode::Fine);
    CHECK(parse_state_mode("coarse") == StateMode::Coarse);
  }
}
