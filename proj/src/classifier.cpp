#include "d2t/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "d2t/error.hpp"
#include "d2t/numfmt.hpp"
#include "d2t/rng.hpp"
#include "d2t/sentence.hpp"
#include "d2t/strings.hpp"

namespace d2t {

std::vector<std::string> feature_words(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& raw : strings::split_whitespace(text)) {
    std::size_t b = 0, e = raw.size();
    while (b < e && strings::is_punct(raw[b])) ++b;
    while (e > b && strings::is_punct(raw[e - 1])) --e;
    if (b < e) out.push_back(strings::lower(std::string_view(raw).substr(b, e - b)));
  }
  return out;
}

LinearizedData linearize_for_features(const MeaningRepresentation& mr) {
  SpecialTokenRegistry reg = SpecialTokenRegistry::with_defaults();
  LinearizeOptions opts;
  opts.auto_register = true;
  return linearize(mr, reg, opts);
}

namespace {

std::vector<std::string> distinct_lower_values(const LinearizedData& data) {
  std::vector<std::string> out;
  for (const auto& v : data.values) {
    std::string l = strings::lower(v);
    if (!l.empty() && std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
  }
  return out;
}

double sentences_per_value(const LinearizedData& data, std::string_view text) {
  const double n_values = static_cast<double>(std::max<std::size_t>(1, distinct_lower_values(data).size()));
  return static_cast<double>(split_sentences(text).sentences.size()) / n_values;
}

FeatureVector raw_features(const LinearizedData& data, std::string_view text,
                           const std::set<std::string, std::less<>>& lexicon, double rate) {
  FeatureVector f{};
  const std::string low = strings::lower(strings::normalize_space(text));
  const auto values = distinct_lower_values(data);

  std::size_t found = 0, over = 0;
  for (const auto& v : values) {
    const std::size_t k = strings::count_bounded(low, v);
    if (k > 0) ++found;
    std::size_t expected = 0;
    for (const auto& dv : data.values) expected += strings::lower(dv) == v;
    if (k > expected) ++over;
  }
  const double nv = static_cast<double>(values.size());
  f[kCoverage] = values.empty() ? 1.0 : static_cast<double>(found) / nv;
  f[kAnyMissing] = found < values.size() ? 1.0 : 0.0;
  f[kOverMultiplicity] = values.empty() ? 0.0 : static_cast<double>(over) / nv;
  f[kAnyOver] = over > 0 ? 1.0 : 0.0;

  // Split before lower-casing: sentence starts are recognized by case.
  const auto sentences = split_sentences(text).sentences;
  std::set<std::string> seen;
  for (const auto& s : sentences) {
    if (!seen.insert(strings::lower(s)).second) f[kDuplicateSentence] = 1.0;
  }
  const double expected_sentences = std::max(0.5, rate * std::max(1.0, nv));
  f[kSentenceRatio] = std::log(std::max(0.5, static_cast<double>(sentences.size())) / expected_sentences);

  std::set<std::string, std::less<>> known;
  for (const auto& w : feature_words(data.text)) {
    if (w.front() != '<') known.insert(w);
  }
  for (const auto& v : values) {
    for (auto& w : feature_words(v)) known.insert(std::move(w));
  }
  const auto words = feature_words(low);
  std::size_t foreign = 0;
  for (const auto& w : words) {
    if (!known.count(w) && !lexicon.count(w)) ++foreign;
  }
  f[kForeign] = words.empty() ? 0.0 : static_cast<double>(foreign) / static_cast<double>(words.size());
  f[kAnyForeign] = foreign > 0 ? 1.0 : 0.0;
  return f;
}

template <typename Row>
std::array<double, kLabelCount> softmax_scores(const FeatureClassifier::Weights& w, const Row& z) {
  std::array<double, kLabelCount> s{};
  for (std::size_t l = 0; l < kLabelCount; ++l) {
    double a = w[l][kFeatureCount];
    for (std::size_t j = 0; j < kFeatureCount; ++j) a += w[l][j] * z[j];
    s[l] = a;
  }
  const double mx = *std::max_element(s.begin(), s.end());
  double total = 0.0;
  for (double& a : s) total += (a = std::exp(a - mx));
  for (double& a : s) a /= total;
  return s;
}

}  // namespace

FeatureVector FeatureClassifier::features(const LinearizedData& data, std::string_view text) const {
  double rate = 1.0;
  if (auto it = sentence_rate.find(mr_type_name(data.mr_type)); it != sentence_rate.end()) {
    rate = it->second;
  } else if (auto all = sentence_rate.find("*"); all != sentence_rate.end()) {
    rate = all->second;
  }
  return raw_features(data, text, lexicon, rate);
}

std::array<double, kLabelCount> FeatureClassifier::probabilities(const FeatureVector& f) const {
  FeatureVector z{};
  for (std::size_t j = 0; j < kFeatureCount; ++j) z[j] = (f[j] - mean[j]) / scale[j];
  return softmax_scores(weights, z);
}

Label FeatureClassifier::classify(const LinearizedData& data, std::string_view text) const {
  const auto p = probabilities(features(data, text));
  const auto best = std::max_element(p.begin(), p.end()) - p.begin();  // first max wins ties
  return kAllLabels[static_cast<std::size_t>(best)];
}

FeatureClassifier train_classifier(const std::vector<CorruptionExample>& corpus, const ClassifierOptions& opts,
                                   std::vector<double>* loss_history) {
  std::set<Label> labels;
  for (const auto& ex : corpus) labels.insert(ex.label);
  if (labels.size() < 2) throw Error(ErrorCode::DegenerateCorpus, "classifier training needs at least two labels");

  // Linearize each distinct record once.
  std::map<std::string, LinearizedData> lin_by_id;
  std::vector<const LinearizedData*> lin(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto it = lin_by_id.find(corpus[i].source_id);
    if (it == lin_by_id.end()) it = lin_by_id.emplace(corpus[i].source_id, linearize_for_features(corpus[i].data)).first;
    lin[i] = &it->second;
  }

  FeatureClassifier model;
  std::map<std::string, std::set<std::string>> records_per_word;
  std::map<std::string, std::pair<double, std::size_t>> rate_acc;
  std::pair<double, std::size_t> all_acc{0.0, 0};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label != Label::Accurate) continue;
    for (const auto& w : feature_words(corpus[i].text)) records_per_word[w].insert(corpus[i].source_id);
    const double r = sentences_per_value(*lin[i], corpus[i].text);
    auto& acc = rate_acc[std::string(mr_type_name(lin[i]->mr_type))];
    acc.first += r;
    ++acc.second;
    all_acc.first += r;
    ++all_acc.second;
  }
  // Words that mostly occur as part of data values are content, not
  // background vocabulary.
  std::map<std::string, std::set<std::string>> value_records_per_word;
  for (const auto& [id, l] : lin_by_id) {
    for (const auto& v : l.values) {
      for (const auto& w : feature_words(v)) value_records_per_word[w].insert(id);
    }
  }
  for (const auto& [w, ids] : records_per_word) {
    if (ids.size() < opts.lexicon_min_records) continue;
    auto it = value_records_per_word.find(w);
    const std::size_t as_value = it == value_records_per_word.end() ? 0 : it->second.size();
    if (2 * as_value < ids.size()) model.lexicon.insert(w);
  }
  for (const auto& [type, acc] : rate_acc) model.sentence_rate[type] = acc.first / static_cast<double>(acc.second);
  if (all_acc.second) model.sentence_rate["*"] = all_acc.first / static_cast<double>(all_acc.second);

  std::vector<FeatureVector> x(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) x[i] = model.features(*lin[i], corpus[i].text);
  const double n = static_cast<double>(corpus.size());
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    double m = 0.0, v = 0.0;
    for (const auto& row : x) m += row[j];
    m /= n;
    for (const auto& row : x) v += (row[j] - m) * (row[j] - m);
    model.mean[j] = m;
    model.scale[j] = std::sqrt(v / n) > 1e-12 ? std::sqrt(v / n) : 1.0;
  }
  for (auto& row : x) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) row[j] = (row[j] - model.mean[j]) / model.scale[j];
  }

  Rng rng(opts.seed);
  for (auto& row : model.weights) {
    for (double& w : row) w = (rng.uniform_real() - 0.5) * 0.02;
  }

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    FeatureClassifier::Weights grad{};
    double loss = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto p = softmax_scores(model.weights, x[i]);
      const auto y = static_cast<std::size_t>(corpus[i].label);
      loss -= std::log(std::max(p[y], 1e-300));
      for (std::size_t l = 0; l < kLabelCount; ++l) {
        const double d = p[l] - (l == y ? 1.0 : 0.0);
        for (std::size_t j = 0; j < kFeatureCount; ++j) grad[l][j] += d * x[i][j];
        grad[l][kFeatureCount] += d;
      }
    }
    if (loss_history) loss_history->push_back(loss / n);
    for (std::size_t l = 0; l < kLabelCount; ++l) {
      for (std::size_t j = 0; j <= kFeatureCount; ++j) model.weights[l][j] -= opts.learning_rate * grad[l][j] / n;
    }
  }
  return model;
}

// ---------------------------------------------------------------- file format
//
//   #d2t-sfc v1
//   mean <f...>
//   scale <f...>
//   weights <label> <w...> <bias>     (one line per label)
//   rate <mr_type> <value>            (zero or more)
//   lexicon <n>
//   <word>                            (n lines)

std::string FeatureClassifier::to_text() const {
  std::ostringstream out;
  out << "#d2t-sfc v1\n";
  out << "mean";
  for (double v : mean) out << " " << format_double(v);
  out << "\nscale";
  for (double v : scale) out << " " << format_double(v);
  out << "\n";
  for (std::size_t l = 0; l < kLabelCount; ++l) {
    out << "weights " << label_name(kAllLabels[l]);
    for (double w : weights[l]) out << " " << format_double(w);
    out << "\n";
  }
  for (const auto& [type, r] : sentence_rate) out << "rate " << type << " " << format_double(r) << "\n";
  out << "lexicon " << lexicon.size() << "\n";
  for (const auto& w : lexicon) out << w << "\n";
  return out.str();
}

namespace {

template <std::size_t N>
void parse_row(const std::vector<std::string>& fields, std::size_t first, std::array<double, N>& row) {
  if (fields.size() != first + N) throw Error(ErrorCode::BadFormat, "wrong number of values in classifier row");
  for (std::size_t j = 0; j < N; ++j) row[j] = parse_double(fields[first + j]);
}

}  // namespace

FeatureClassifier FeatureClassifier::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "#d2t-sfc v1") throw Error(ErrorCode::BadFormat, "missing classifier header");
  FeatureClassifier model;
  std::set<Label> seen_labels;
  while (std::getline(in, line)) {
    const auto fields = strings::split_whitespace(line);
    if (fields.empty()) continue;
    if (fields[0] == "mean") {
      parse_row(fields, 1, model.mean);
    } else if (fields[0] == "scale") {
      parse_row(fields, 1, model.scale);
    } else if (fields[0] == "weights" && fields.size() > 1) {
      const Label l = parse_label(fields[1]);
      parse_row(fields, 2, model.weights[static_cast<std::size_t>(l)]);
      seen_labels.insert(l);
    } else if (fields[0] == "rate" && fields.size() == 3) {
      model.sentence_rate[fields[1]] = parse_double(fields[2]);
    } else if (fields[0] == "lexicon" && fields.size() == 2) {
      const auto n = std::stoul(fields[1]);
      for (std::size_t k = 0; k < n; ++k) {
        if (!std::getline(in, line)) throw Error(ErrorCode::BadFormat, "truncated lexicon");
        model.lexicon.insert(line);
      }
    } else {
      throw Error(ErrorCode::BadFormat, "unexpected classifier line: " + line);
    }
  }
  if (seen_labels.size() != kLabelCount) throw Error(ErrorCode::BadFormat, "classifier needs one weight row per label");
  return model;
}

void FeatureClassifier::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << to_text();
}

FeatureClassifier FeatureClassifier::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

}  // namespace d2t
