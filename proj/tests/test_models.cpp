#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "d2t/classifier.hpp"
#include "d2t/ngram.hpp"
#include "error_code.hpp"
#include "fixtures.hpp"
#include "toy_corpus.hpp"

using namespace d2t;
using namespace d2t::testing;

namespace {

TrainingSequence seq(TokenSeq ids) {
  TrainingSequence s;
  s.ids = std::move(ids);
  return s;
}

NgramOptions bigram_only(double smoothing) {
  NgramOptions o;
  o.order = 2;
  o.smoothing = smoothing;
  o.weights = {1.0, 0.0};
  return o;
}

std::vector<CorruptionExample> restaurant_sfc(std::size_t n, std::uint64_t seed) {
  return generate_sfc_corpus(to_sources(restaurant_corpus(n, seed)), seed);
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("bigram counts") {
    const TokenId a = 0, b = 1, c = 2;
    auto single = train_ngram({seq({a, b, c})}, 4, bigram_only(1e-9));
    const TokenSeq ctx_a = {a};
    CHECK(single.probability(ctx_a, b) == doctest::Approx(1.0).epsilon(1e-6));
    auto split = train_ngram({seq({a, b}), seq({a, c})}, 4, bigram_only(1e-9));
    CHECK(split.probability(ctx_a, b) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(split.probability(ctx_a, c) == doctest::Approx(0.5).epsilon(1e-6));
  }

  TEST_CASE("additive smoothing closed form") {
    auto m = train_ngram({seq({0, 1}), seq({0, 2})}, 5, bigram_only(0.5));
    const TokenSeq ctx = {0};
    CHECK(m.probability(ctx, 1) == doctest::Approx((1 + 0.5) / (2 + 0.5 * 5)));
    CHECK(m.probability(ctx, 4) == doctest::Approx(0.5 / (2 + 0.5 * 5)));
  }

  TEST_CASE("unseen contexts back off to the unigram") {
    auto m = train_ngram({seq({0, 1, 1, 2})}, 4, NgramOptions{});
    const TokenSeq unseen = {3, 3, 3};
    auto d = m.next_distribution(unseen);
    // Unigram only: counts {0:1, 1:2, 2:1}, total 4.
    for (TokenId t = 0; t < 4; ++t) {
      const double count = t == 1 ? 2 : (t == 3 ? 0 : 1);
      CHECK(d[t] == doctest::Approx((count + 0.01) / (4 + 0.04)));
    }
    auto e = m.next_distribution(TokenSeq{});
    CHECK(e == d);
  }

  TEST_CASE("property: distributions normalize and agree with probability()") {
    auto records = restaurant_corpus(30, 2);
    std::vector<TrainingSequence> corpus;
    Rng rng(1);
    for (int k = 0; k < 40; ++k) {
      TokenSeq ids;
      for (std::size_t j = 0; j < 3 + rng.uniform(10); ++j) ids.push_back(static_cast<TokenId>(rng.uniform(7)));
      corpus.push_back(seq(ids));
    }
    for (std::size_t order : {1, 2, 3, 5}) {
      NgramOptions o;
      o.order = order;
      auto m = train_ngram(corpus, 8, o);
      for (int k = 0; k < 50; ++k) {
        TokenSeq prefix;
        for (std::size_t j = 0; j < rng.uniform(6); ++j) prefix.push_back(static_cast<TokenId>(rng.uniform(8)));
        auto d = m.next_distribution(prefix);
        double total = 0.0;
        for (TokenId t = 0; t < d.size(); ++t) {
          CHECK(d[t] > 0.0);
          CHECK(d[t] == doctest::Approx(m.probability(prefix, t)).epsilon(1e-12));
          total += d[t];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("n-gram options and errors") {
    CHECK(default_interpolation_weights(3) == std::vector<double>{3.0 / 6, 2.0 / 6, 1.0 / 6});
    CHECK(code_of([] { train_ngram({}, 4); }) == ErrorCode::EmptyCorpus);
    CHECK(code_of([] { NgramScorer(4, NgramOptions{2, 0.01, {0.5, 0.4}}); }) == ErrorCode::BadFormat);
    CHECK(code_of([] { NgramScorer(4, NgramOptions{2, 0.0, {}}); }) == ErrorCode::BadFormat);
    CHECK(code_of([] { NgramScorer(4, NgramOptions{0, 0.01, {}}); }) == ErrorCode::BadFormat);
    NgramScorer m(3, NgramOptions{});
    CHECK(code_of([&] { m.add_sequence(TokenSeq{0, 5}); }) == ErrorCode::InvalidId);
  }

  TEST_CASE("n-gram file round trip") {
    auto m = train_ngram({seq({0, 1, 2, 3}), seq({3, 2, 1})}, 6, NgramOptions{3, 0.1, {}});
    auto back = NgramScorer::from_text(m.to_text());
    CHECK(back == m);
    CHECK(back.to_text() == m.to_text());
    auto path = std::filesystem::temp_directory_path() / "d2t_ngram_test.lm";
    m.save(path);
    CHECK(NgramScorer::load(path) == m);
    std::filesystem::remove(path);
    CHECK(code_of([] { NgramScorer::from_text("#d2t-ngram v2\n"); }) == ErrorCode::BadFormat);
  }

  TEST_CASE("classifier features") {
    auto data = linearize_for_features(parse_mr(MrType::Slots, kE2eRaw));
    FeatureClassifier clf;
    auto f = clf.features(data, kE2eText);
    CHECK(f[kCoverage] == doctest::Approx(1.0));
    CHECK(f[kAnyMissing] == 0.0);
    CHECK(f[kDuplicateSentence] == 0.0);
    auto g = clf.features(data, "You can find a coffee shop in the riverside area. You can find a coffee shop in the riverside area.");
    CHECK(g[kCoverage] == doctest::Approx(2.0 / 3.0));
    CHECK(g[kAnyMissing] == 1.0);
    CHECK(g[kDuplicateSentence] == 1.0);
    auto h = clf.features(data, "Zizzi is a coffee shop by the riverside. Zizzi is Zizzi.");
    CHECK(h[kAnyOver] == 1.0);
    CHECK(feature_words("Hello, World! it's") == std::vector<std::string>{"hello", "world", "it's"});
  }

  TEST_CASE("classifier training") {
    auto corpus = restaurant_sfc(80, 4);
    std::vector<double> loss;
    ClassifierOptions opts;
    opts.epochs = 200;
    auto clf = train_classifier(corpus, opts, &loss);
    REQUIRE(loss.size() == 200);
    for (std::size_t k = 1; k < loss.size(); ++k) CHECK(loss[k] <= loss[k - 1] + 1e-12);
    CHECK(loss.back() < loss.front());

    std::size_t correct = 0;
    for (const auto& ex : corpus) {
      correct += clf.classify(linearize_for_features(ex.data), ex.text) == ex.label;
    }
    CHECK(static_cast<double>(correct) / static_cast<double>(corpus.size()) > 0.8);

    CHECK(train_classifier(corpus, opts) == clf);
    auto back = FeatureClassifier::from_text(clf.to_text());
    CHECK(back.to_text() == clf.to_text());
    CHECK(back == clf);
    auto path = std::filesystem::temp_directory_path() / "d2t_sfc_test.model";
    clf.save(path);
    CHECK(FeatureClassifier::load(path) == clf);
    std::filesystem::remove(path);
  }

  TEST_CASE("classifier needs two labels") {
    auto corpus = restaurant_sfc(10, 1);
    std::vector<CorruptionExample> accurate;
    for (const auto& ex : corpus) {
      if (ex.label == Label::Accurate) accurate.push_back(ex);
    }
    CHECK(code_of([&] { train_classifier(accurate); }) == ErrorCode::DegenerateCorpus);
  }
}
