#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "d2t/metrics.hpp"
#include "d2t/rng.hpp"
#include "error_code.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace d2t;
using namespace d2t::testing;

namespace {

EvalPair pair(std::string hyp, std::vector<std::string> refs, std::string id = "x") {
  return EvalPair{std::move(id), std::move(hyp), std::move(refs), std::nullopt};
}

EvalPair with_data(std::string hyp, MrType t, std::string_view raw) {
  EvalPair p = pair(std::move(hyp), {"unused"});
  p.data = parse_mr(t, raw);
  return p;
}

std::vector<std::string> split_spaces(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

const std::vector<EvalPair> kIdentity = {
    pair("the leader of aarhus is jacob bundsgaard .", {"the leader of aarhus is jacob bundsgaard ."}),
    pair("zizzi is a coffee shop by the river .", {"zizzi is a coffee shop by the river ."}),
    pair("what is your favorite game from ea canada ?", {"what is your favorite game from ea canada ?"}),
};

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("tokenization") {
    CHECK(metric_tokens("The cat, sat.") == std::vector<std::string>{"the", "cat", ",", "sat", "."});
  }

  TEST_CASE("identity corpus maxima") {
    CHECK(bleu(kIdentity) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(rouge_l(kIdentity) == doctest::Approx(1.0));
    CHECK(cider(kIdentity) == doctest::Approx(10.0).epsilon(1e-12));
  }

  TEST_CASE("bleu hand examples") {
    auto clipped = bleu_detail({pair("the the the the", {"the cat"})});
    CHECK(clipped.precision[0] == doctest::Approx(0.25));
    CHECK(clipped.score == 0.0);

    auto shorter = bleu_detail({pair("the cat sat on the", {"the cat sat on the mat"})});
    for (double p : shorter.precision) CHECK(p == doctest::Approx(1.0));
    CHECK(shorter.brevity_penalty == doctest::Approx(std::exp(1.0 - 6.0 / 5.0)).epsilon(1e-12));
    CHECK(shorter.score == doctest::Approx(100.0 * std::exp(-0.2)).epsilon(1e-12));

    // Closest reference length, ties to the shorter reference.
    auto multi = bleu_detail({pair("a b c d e", {"a b c d", "a b c d e f"})});
    CHECK(multi.ref_len == 4.0);
    CHECK(multi.brevity_penalty == 1.0);
    CHECK(bleu({pair("Hello World", {"hello world"})}) == 0.0);  // no 3-grams at all
    CHECK(bleu({pair("", {"a b c d"})}) == 0.0);
  }

  TEST_CASE("rouge-l") {
    CHECK(lcs_length(split_spaces("a b c d"), split_spaces("a c d e")) == 3.0);
    const double p = 0.75, r = 0.75, b2 = 1.44;
    CHECK(rouge_l({pair("a b c d", {"a c d e"})}) == doctest::Approx((1 + b2) * p * r / (r + b2 * p)));
    CHECK(rouge_l({pair("a b", {"c d"})}) == 0.0);
    // Precision and recall are maximized separately over references.
    const double p2 = 2.0 / 3.0, r2 = 1.0;
    CHECK(rouge_l({pair("a b c", {"a b", "x y z w"})}) == doctest::Approx((1 + b2) * p2 * r2 / (r2 + b2 * p2)));
  }

  TEST_CASE("cider against the direct formula") {
    const std::vector<EvalPair> two = {
        pair("the cat sat on the mat", {"the cat is on the mat", "a cat sat on a mat"}),
        pair("a dog ran in the park", {"the dog ran in a park", "a dog runs in the park today"}),
    };
    std::vector<std::vector<std::string>> hyps;
    std::vector<std::vector<std::vector<std::string>>> refs;
    for (const auto& p : two) {
      hyps.push_back(split_spaces(p.hypothesis));
      refs.emplace_back();
      for (const auto& r : p.references) refs.back().push_back(split_spaces(r));
    }
    CHECK(std::abs(cider(two) - cider_oracle(hyps, refs)) < 1e-9);
    CHECK(cider({pair("a b", {"c d"}), pair("e f", {"g h"})}) == 0.0);
  }

  TEST_CASE("property: permutation invariance and serial/parallel parity") {
    Rng rng(6);
    const std::vector<std::string> words = {"the", "cat", "dog", "sat", "ran", "on", "a", "mat", "park", "."};
    auto sentence = [&] {
      std::string s;
      for (std::size_t k = 0; k < 3 + rng.uniform(6); ++k) s += words[rng.uniform(words.size())] + " ";
      return s;
    };
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<EvalPair> pairs;
      for (int k = 0; k < 8; ++k) pairs.push_back(pair(sentence(), {sentence(), sentence()}));
      auto shuffled = pairs;
      for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.uniform(i)]);
      CHECK(bleu(pairs) == doctest::Approx(bleu(shuffled)).epsilon(1e-12));
      CHECK(rouge_l(pairs) == doctest::Approx(rouge_l(shuffled)).epsilon(1e-12));
      CHECK(cider(pairs) == doctest::Approx(cider(shuffled)).epsilon(1e-12));
      CHECK(bleu(pairs, true) == bleu(pairs, false));
      CHECK(cider(pairs, true) == cider(pairs, false));
      CHECK(rouge_l(pairs, true) == rouge_l(pairs, false));
    }
  }

  TEST_CASE("empty inputs") {
    CHECK(code_of([] { bleu({}); }) == ErrorCode::EmptySet);
    CHECK(code_of([] { bleu({pair("a", {})}); }) == ErrorCode::MissingData);
  }

  TEST_CASE("slot error rate") {
    auto zizzi = slot_error_rate({with_data(std::string(kE2eText), MrType::Slots, kE2eRaw)});
    CHECK(zizzi.ser == 0.0);
    CHECK(zizzi.accurate == std::vector<bool>{true});

    const std::string uk_raw = "name[The Wrestlers], near[United Kingdom]";
    auto uk = slot_error_rate({with_data("The Wrestlers is in the UK.", MrType::Slots, uk_raw)});
    CHECK(uk.missed == 1);
    CHECK(uk.accurate == std::vector<bool>{false});
    RealizationTable table = {{"United Kingdom", {"UK"}}};
    CHECK(slot_error_rate({with_data("The Wrestlers is in the UK.", MrType::Slots, uk_raw)}, table).ser == 0.0);

    auto empty = slot_error_rate({with_data("", MrType::Slots, kE2eRaw)});
    CHECK(empty.ser == 1.0);
    CHECK(empty.missed == 3);

    auto twice = slot_error_rate({with_data("Zizzi, Zizzi: a coffee shop by the riverside.", MrType::Slots, kE2eRaw)});
    CHECK(twice.extra == 1);
    CHECK_FALSE(twice.accurate[0]);
    CHECK(code_of([] { slot_error_rate({pair("x", {"y"})}); }) == ErrorCode::MissingData);

    auto path = std::filesystem::temp_directory_path() / "d2t_realizations.tsv";
    std::ofstream(path) << "# comment\nUnited Kingdom\tUK\tBritain\n";
    CHECK(load_realization_table(path) == RealizationTable{{"United Kingdom", {"UK", "Britain"}}});
    std::filesystem::remove(path);
  }

  TEST_CASE("property: zero SER exactly when every pair is accurate") {
    Rng rng(10);
    const std::vector<std::string> vals = {"Zizzi", "coffee shop", "riverside", "cheap"};
    for (int trial = 0; trial < 100; ++trial) {
      std::string hyp;
      for (std::size_t k = 0; k < rng.uniform(6); ++k) hyp += vals[rng.uniform(vals.size())] + " and ";
      auto r = slot_error_rate({with_data(hyp, MrType::Slots, kE2eRaw)});
      CHECK((r.ser == 0.0) == r.accurate[0]);
      CHECK(hsa(r) == (r.accurate[0] ? 1.0 : 0.0));
    }
  }

  TEST_CASE("accuracy fractions and agreement") {
    CHECK(dsa({Label::Accurate, Label::Accurate}) == 1.0);
    CHECK(dsa({Label::Accurate, Label::Omission, Label::Accurate, Label::Accurate}) == 0.75);
    CHECK(code_of([] { dsa({}); }) == ErrorCode::EmptySet);

    std::map<std::string, bool> a, b, c;
    for (int k = 0; k < 120; ++k) {
      const std::string id = "id" + std::to_string(k);
      a[id] = k % 2;
      b[id] = k < 110 ? a[id] : !a[id];
      c[id] = !a[id];
    }
    CHECK(label_agreement(a, a) == 1.0);
    CHECK(label_agreement(a, c) == 0.0);
    CHECK(label_agreement(a, b) == doctest::Approx(110.0 / 120.0));
    CHECK(label_agreement(a, b) == doctest::Approx(0.9167).epsilon(1e-4));
    auto d = b;
    d.erase("id0");
    d["other"] = true;
    CHECK(code_of([&] { label_agreement(a, d); }) == ErrorCode::IdMismatch);
  }

  TEST_CASE("dale-chall") {
    const auto easy = load_easy_words();
    CHECK(easy.size() > 2900);
    CHECK(easy.count("the"));
    const std::string plain = "The big red dog ran and the cat sat down.";
    CHECK(dale_chall({plain}, easy) == doctest::Approx(0.496).epsilon(1e-4));
    const std::string hard = "The big red dog ran and the photosynthesis quantum down.";
    CHECK(dale_chall({hard}, easy) == doctest::Approx(7.2905).epsilon(1e-4));
    CHECK(dale_chall({hard}, easy, DaleChallOptions{{"photosynthesis", "quantum"}}) ==
          doctest::Approx(0.496).epsilon(1e-4));
    CHECK(code_of([&] { dale_chall({}, easy); }) == ErrorCode::EmptyCorpus);
    CHECK(code_of([&] { dale_chall({"", "  "}, easy); }) == ErrorCode::EmptyCorpus);
    CHECK(dale_chall_formula(5.0, 10.0) == doctest::Approx(0.1579 * 5 + 0.496));
  }

  TEST_CASE("property: dale-chall is monotone") {
    const auto easy = load_easy_words();
    const std::vector<std::string> easy_pool = {"the", "dog", "cat", "ran", "big", "red", "sat", "and", "down"};
    const std::vector<std::string> hard_pool = {"photosynthesis", "quantum", "bureaucracy", "ephemeral"};
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::vector<std::string>> sentences(1 + rng.uniform(4));
      for (auto& s : sentences) {
        for (std::size_t k = 0; k < 2 + rng.uniform(8); ++k) {
          s.push_back(rng.uniform(3) ? easy_pool[rng.uniform(easy_pool.size())] : hard_pool[rng.uniform(hard_pool.size())]);
        }
      }
      auto render = [](const std::vector<std::vector<std::string>>& ss) {
        std::string out;
        for (const auto& s : ss) {
          std::string sent;
          for (const auto& w : s) sent += (sent.empty() ? "" : " ") + w;
          sent[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sent[0])));
          out += sent + ". ";
        }
        return out;
      };
      const double base = dale_chall({render(sentences)}, easy);

      // More difficult words, same lengths.
      auto harder = sentences;
      auto& s0 = harder[rng.uniform(harder.size())];
      for (auto& w : s0) {
        if (std::find(easy_pool.begin(), easy_pool.end(), w) != easy_pool.end()) {
          w = hard_pool[0];
          break;
        }
      }
      CHECK(dale_chall({render(harder)}, easy) >= base - 1e-12);

      // Longer sentences, same words: merge the first two.
      if (sentences.size() >= 2) {
        auto merged = sentences;
        merged[0].insert(merged[0].end(), merged[1].begin(), merged[1].end());
        merged.erase(merged.begin() + 1);
        CHECK(dale_chall({render(merged)}, easy) >= base - 1e-12);
      }

      const double pdw = rng.uniform_real() * 40, asl = 1 + rng.uniform_real() * 30;
      CHECK(dale_chall_formula(pdw + rng.uniform_real(), asl) >= dale_chall_formula(pdw, asl));
      CHECK(dale_chall_formula(pdw, asl + rng.uniform_real()) >= dale_chall_formula(pdw, asl));
    }
  }

  TEST_CASE("corpus statistics") {
    auto s = corpus_stats({"The cat the Cat"});
    CHECK(s.unique_words == 4);
    CHECK(s.pct_capitalized == doctest::Approx(50.0));
    auto one = corpus_stats({"word"});
    CHECK(one.unique_words == 1);
    CHECK(one.pct_capitalized == 0.0);
    auto punct = corpus_stats({"", "Aarhus, is (Aarhus).", ""});
    CHECK(punct.unique_words == 2);
    auto tokens = corpus_stats({"The cat the Cat Cat"}, CapitalBasis::Tokens);
    CHECK(tokens.pct_capitalized == doctest::Approx(60.0));
  }
}
