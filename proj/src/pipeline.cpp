#include "d2t/pipeline.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "d2t/corruptor.hpp"
#include "d2t/decoder.hpp"
#include "d2t/error.hpp"
#include "d2t/kernels.hpp"
#include "d2t/sequence.hpp"
#include "d2t/strings.hpp"

namespace d2t {

using nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return 1;
  if (dynamic_cast<const ModelError*>(&e)) return 3;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->code()) {
      case ErrorCode::VocabTooSmall:
      case ErrorCode::MissingSpecial:
      case ErrorCode::InvalidId:
      case ErrorCode::ScorerFailure:
      case ErrorCode::DegenerateCorpus:
        return 3;
      default:
        return 2;
    }
  }
  return 2;
}

namespace {

std::uint64_t require_seed(const PipelineConfig& cfg, const char* command) {
  if (!cfg.seed) throw UsageError(std::string(command) + " requires --seed");
  return *cfg.seed;
}

void require_path(const std::filesystem::path& p, const char* what) {
  if (p.empty()) throw UsageError(std::string("missing path for ") + what);
}

template <typename T, typename Load>
T load_model(const std::filesystem::path& p, const char* what, Load&& load) {
  require_path(p, what);
  try {
    return load(p);
  } catch (const Error& e) {
    throw ModelError(e.code(), std::string(what) + " " + p.string() + ": " + e.detail());
  }
}

LinearizeOptions lin_options(const PipelineConfig& cfg, bool auto_register) {
  LinearizeOptions o;
  o.slot_order = cfg.slot_order;
  o.auto_register = auto_register;
  return o;
}

SpecialTokenRegistry registry_or_defaults(const PipelineConfig& cfg) {
  if (!cfg.registry.empty() && std::filesystem::exists(cfg.registry)) {
    return load_model<SpecialTokenRegistry>(cfg.registry, "registry", SpecialTokenRegistry::load);
  }
  return SpecialTokenRegistry::with_defaults();
}

void log_failure(std::ostream& log, const std::string& id, const std::exception& e) {
  log << "record '" << id << "': " << e.what() << "\n";
}

void check_strict(const CommandReport& r, const PipelineConfig& cfg, const char* command) {
  if (cfg.strict && !r.failed_ids.empty()) {
    throw Error(ErrorCode::BadFormat, std::string(command) + ": " + std::to_string(r.failed_ids.size()) +
                                          " record(s) failed, first '" + r.failed_ids.front() + "'");
  }
}

json label_json(const std::optional<Label>& l) {
  return l ? json(std::string(label_name(*l))) : json(nullptr);
}

}  // namespace

Models load_models(const PipelineConfig& cfg, bool need_lm, bool want_sfc) {
  Models m{load_model<SpecialTokenRegistry>(cfg.registry, "registry", SpecialTokenRegistry::load),
           load_model<BpeVocab>(cfg.vocab, "vocab", BpeVocab::load), std::nullopt, std::nullopt};
  if (need_lm) {
    m.lm = load_model<NgramScorer>(cfg.lm, "lm", NgramScorer::load);
    if (m.lm->vocab_size() != m.vocab.size()) {
      throw ModelError(ErrorCode::InvalidId, "lm vocabulary size does not match the BPE vocabulary");
    }
  }
  if (want_sfc && !cfg.sfc.empty()) m.sfc = load_model<FeatureClassifier>(cfg.sfc, "sfc", FeatureClassifier::load);
  return m;
}

CommandReport cmd_linearize(std::istream& in, std::ostream& out, std::ostream& log, const PipelineConfig& cfg) {
  const bool have_registry = !cfg.registry.empty() && std::filesystem::exists(cfg.registry);
  SpecialTokenRegistry reg = registry_or_defaults(cfg);
  const auto opts = lin_options(cfg, !have_registry);
  CommandReport report;
  for_each_line(in, [&](std::size_t line_no, const std::string& line) {
    ++report.records;
    std::string id = "line " + std::to_string(line_no);
    try {
      const CorpusRecord rec = parse_record(line);
      id = rec.id;
      const LinearizedData lin = linearize(rec.parse(), reg, opts);
      json j = json::parse(record_to_json(rec));
      j["data_linearized"] = lin.text;
      out << j.dump() << "\n";
      ++report.written;
    } catch (const Error& e) {
      report.failed_ids.push_back(id);
      log_failure(log, id, e);
    }
  });
  check_strict(report, cfg, "linearize");
  return report;
}

CommandReport cmd_corrupt(std::istream& in, std::ostream& out, std::ostream& log, const PipelineConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg, "corrupt");
  CommandReport report;
  std::vector<SourceRecord> sources;
  std::map<std::string, CorpusRecord> raw;
  std::set<std::string> ids;
  for_each_line(in, [&](std::size_t line_no, const std::string& line) {
    ++report.records;
    std::string id = "line " + std::to_string(line_no);
    try {
      CorpusRecord rec = parse_record(line);
      id = rec.id;
      if (!ids.insert(rec.id).second) throw Error(ErrorCode::BadFormat, "duplicate id");
      if (!rec.text || strings::trim(*rec.text).empty()) {
        log << "record '" << rec.id << "': no text, skipped\n";
        return;
      }
      sources.push_back({rec.id, rec.parse(), *rec.text});
      raw.emplace(rec.id, std::move(rec));
    } catch (const Error& e) {
      report.failed_ids.push_back(id);
      log_failure(log, id, e);
    }
  });
  check_strict(report, cfg, "corrupt");

  CorruptOptions copts;
  copts.repeat_count = cfg.repeat_count;
  copts.parallel = cfg.parallel;
  SpecialTokenRegistry reg = registry_or_defaults(cfg);
  const auto lopts = lin_options(cfg, true);
  std::map<std::string, std::string> linearized;
  for (const auto& s : sources) linearized[s.id] = linearize(s.data, reg, lopts).text;

  for (const auto& ex : generate_sfc_corpus(sources, seed, copts)) {
    const CorpusRecord& rec = raw.at(ex.source_id);
    json j = json::object();
    j["id"] = ex.source_id;
    j["label"] = std::string(label_name(ex.label));
    j["data_linearized"] = linearized.at(ex.source_id);
    j["text"] = ex.text;
    j["seed"] = ex.seed;
    j["mr_type"] = std::string(mr_type_name(rec.mr_type));
    j["mr_raw"] = rec.mr_raw;
    out << j.dump() << "\n";
    ++report.written;
  }
  return report;
}

void cmd_train_bpe(std::istream& in, std::ostream& log, const PipelineConfig& cfg) {
  require_seed(cfg, "train bpe");
  require_path(cfg.registry, "registry");
  require_path(cfg.vocab, "vocab");
  SpecialTokenRegistry reg = registry_or_defaults(cfg);
  const auto opts = lin_options(cfg, true);
  std::vector<std::string> corpus;
  for (const auto& rec : read_records(in)) {
    corpus.push_back(linearize(rec.parse(), reg, opts).text);
    if (rec.text) corpus.push_back(*rec.text);
  }
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no records to train on");
  const BpeVocab vocab = train_bpe(corpus, cfg.vocab_size, reg.surfaces(), cfg.parallel);
  reg.save(cfg.registry);
  vocab.save(cfg.vocab);
  log << "bpe: " << vocab.size() << " tokens (" << vocab.merges().size() << " merges), " << reg.size()
      << " special tokens\n";
}

void cmd_train_lm(std::istream& in, std::ostream& log, const PipelineConfig& cfg) {
  require_seed(cfg, "train lm");
  require_path(cfg.lm, "lm");
  const Models m = load_models(cfg, false, false);
  const auto opts = lin_options(cfg, false);
  std::vector<TrainingSequence> seqs;
  for (const auto& rec : read_records(in)) {
    if (!rec.text) continue;
    seqs.push_back(build_sequence(linearize(rec.parse(), m.registry, opts), rec.text, m.vocab));
  }
  const NgramScorer lm = train_ngram(seqs, m.vocab.size(), cfg.ngram);
  lm.save(cfg.lm);
  log << "lm: order " << lm.order() << " over " << seqs.size() << " sequences\n";
}

void cmd_train_sfc(std::istream& in, std::ostream& log, const PipelineConfig& cfg) {
  ClassifierOptions copts = cfg.classifier;
  copts.seed = require_seed(cfg, "train sfc");
  require_path(cfg.sfc, "sfc");
  std::vector<CorruptionExample> corpus;
  for_each_line(in, [&](std::size_t line_no, const std::string& line) {
    try {
      const json j = json::parse(line);
      const CorpusRecord rec = parse_record(line);
      corpus.push_back({rec.parse(), j.at("text").get<std::string>(), parse_label(j.at("label").get<std::string>()),
                        rec.id, j.value("seed", std::uint64_t{0})});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::BadFormat, "line " + std::to_string(line_no) + ": " + e.what());
    }
  });
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no examples to train on");
  const FeatureClassifier clf = train_classifier(corpus, copts);
  clf.save(cfg.sfc);
  log << "sfc: trained on " << corpus.size() << " examples\n";
}

CommandReport cmd_generate(std::istream& in, std::ostream& out, std::ostream& log, const PipelineConfig& cfg) {
  require_seed(cfg, "generate");
  const Models m = load_models(cfg, true, true);
  GenerateOptions gopts;
  gopts.decode = cfg.decode;
  gopts.linearize = lin_options(cfg, false);
  gopts.rerank = cfg.rerank;
  const FidelityClassifier* clf = m.sfc ? &*m.sfc : nullptr;

  CommandReport report;
  constexpr std::size_t kBatch = 64;
  std::vector<std::pair<std::size_t, std::string>> batch;
  auto flush = [&] {
    std::vector<std::string> lines(batch.size());
    std::vector<std::string> ids(batch.size());
    std::vector<std::string> errors(batch.size());
    kernels::for_each_index(cfg.parallel, batch.size(), [&](std::size_t i) {
      ids[i] = "line " + std::to_string(batch[i].first);
      try {
        const CorpusRecord rec = parse_record(batch[i].second);
        ids[i] = rec.id;
        const GenerateResult g = generate(rec.parse(), *m.lm, clf, m.vocab, m.registry, gopts);
        json j = json::object();
        j["id"] = rec.id;
        j["text"] = g.text;
        j["top_label"] = label_json(g.top_label);
        j["candidates"] = json::array();
        for (const auto& c : g.candidates) {
          j["candidates"].push_back({{"text", c.text},
                                     {"log_score", c.candidate.normalized_score},
                                     {"label", clf ? label_json(c.label) : json(nullptr)}});
        }
        lines[i] = j.dump();
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ++report.records;
      if (!errors[i].empty()) {
        report.failed_ids.push_back(ids[i]);
        log << "record '" << ids[i] << "': " << errors[i] << "\n";
        continue;
      }
      out << lines[i] << "\n";
      ++report.written;
    }
    batch.clear();
  };
  for_each_line(in, [&](std::size_t line_no, const std::string& line) {
    batch.emplace_back(line_no, line);
    if (batch.size() == kBatch) flush();
  });
  flush();
  check_strict(report, cfg, "generate");
  return report;
}

std::string EvalReport::to_json() const {
  json j = json::object();
  j["pairs"] = pairs;
  j["bleu"] = bleu;
  j["rouge_l"] = rouge_l;
  j["cider"] = cider;
  j["ser"] = ser;
  j["hsa"] = hsa;
  j["dsa"] = dsa ? json(*dsa) : json(nullptr);
  j["dale_chall"] = dale_chall ? json(*dale_chall) : json(nullptr);
  j["unique_words"] = unique_words;
  j["pct_capitalized"] = pct_capitalized;
  return j.dump();
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  auto row = [&](const char* name, const std::optional<double>& v) {
    out << std::left << std::setw(16) << name;
    if (v) out << *v;
    else out << "-";
    out << "\n";
  };
  out << std::left << std::setw(16) << "pairs" << pairs << "\n";
  row("BLEU", bleu);
  row("ROUGE-L", rouge_l);
  row("CIDEr", cider);
  row("SER", ser);
  row("HSA", hsa);
  row("DSA", dsa);
  row("Dale-Chall", dale_chall);
  out << std::left << std::setw(16) << "unique words" << unique_words << "\n";
  row("% capitalized", pct_capitalized);
  return out.str();
}

EvalReport cmd_evaluate(std::istream& hyps, std::istream& refs, const PipelineConfig& cfg) {
  std::map<std::string, std::string> hyp_by_id;
  for_each_line(hyps, [&](std::size_t line_no, const std::string& line) {
    try {
      const json j = json::parse(line);
      const auto id = j.at("id").get<std::string>();
      if (!hyp_by_id.emplace(id, j.at("text").get<std::string>()).second) {
        throw Error(ErrorCode::BadFormat, "duplicate hypothesis id '" + id + "'");
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::BadFormat, "hypotheses line " + std::to_string(line_no) + ": " + e.what());
    }
  });
  const auto records = read_records(refs);
  if (records.size() != hyp_by_id.size()) {
    throw Error(ErrorCode::IdMismatch, std::to_string(hyp_by_id.size()) + " hypotheses for " +
                                           std::to_string(records.size()) + " references");
  }
  std::vector<EvalPair> pairs;
  for (const auto& rec : records) {
    auto it = hyp_by_id.find(rec.id);
    if (it == hyp_by_id.end()) throw Error(ErrorCode::IdMismatch, "no hypothesis for id '" + rec.id + "'");
    auto references = rec.all_references();
    if (references.empty()) throw Error(ErrorCode::MissingData, "record '" + rec.id + "' has no reference text");
    pairs.push_back({rec.id, it->second, std::move(references), rec.parse()});
  }
  if (pairs.empty()) throw Error(ErrorCode::EmptySet, "nothing to evaluate");

  EvalReport r;
  r.pairs = pairs.size();
  r.bleu = bleu(pairs, cfg.parallel);
  r.rouge_l = rouge_l(pairs, cfg.parallel);
  r.cider = cider(pairs, cfg.parallel);
  const RealizationTable table =
      cfg.realization_table.empty() ? RealizationTable{} : load_realization_table(cfg.realization_table);
  const SerResult ser = slot_error_rate(pairs, table);
  r.ser = ser.ser;
  r.hsa = hsa(ser);

  if (!cfg.sfc.empty()) {
    const auto clf = load_model<FeatureClassifier>(cfg.sfc, "sfc", FeatureClassifier::load);
    SpecialTokenRegistry reg = registry_or_defaults(cfg);
    const auto opts = lin_options(cfg, true);
    std::vector<Label> labels;
    for (const auto& p : pairs) labels.push_back(clf.classify(linearize(*p.data, reg, opts), p.hypothesis));
    r.dsa = dsa(labels);
  }

  std::vector<std::string> texts;
  for (const auto& p : pairs) texts.push_back(p.hypothesis);
  try {
    r.dale_chall = dale_chall(texts, load_easy_words());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyCorpus) throw;
  }
  const CorpusStats stats = corpus_stats(texts);
  r.unique_words = stats.unique_words;
  r.pct_capitalized = stats.pct_capitalized;
  return r;
}

namespace {

std::string xml_unescape(std::string_view s) {
  static const std::pair<std::string_view, char> entities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool hit = false;
    if (s[i] == '&') {
      for (const auto& [name, c] : entities) {
        if (s.compare(i, name.size(), name) == 0) {
          out += c;
          i += name.size();
          hit = true;
          break;
        }
      }
    }
    if (!hit) out += s[i++];
  }
  return out;
}

}  // namespace

std::vector<std::string> read_texts(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string all = buf.str();
  std::vector<std::string> texts;
  if (all.find("<lex") != std::string::npos) {
    for (std::size_t pos = all.find("<lex"); pos != std::string::npos; pos = all.find("<lex", pos)) {
      const std::size_t open_end = all.find('>', pos);
      if (open_end == std::string::npos) break;
      if (all[open_end - 1] == '/') {
        pos = open_end;
        continue;
      }
      const std::size_t close = all.find("</lex>", open_end);
      if (close == std::string::npos) break;
      texts.push_back(xml_unescape(strings::trim(std::string_view(all).substr(open_end + 1, close - open_end - 1))));
      pos = close;
    }
    return texts;
  }
  std::istringstream lines(all);
  for_each_line(lines, [&](std::size_t, const std::string& line) {
    if (strings::trim(line).front() != '{') {
      texts.push_back(line);
      return;
    }
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::BadFormat, "invalid JSON line");
    if (auto it = j.find("text"); it != j.end() && it->is_string()) texts.push_back(it->get<std::string>());
    if (auto it = j.find("references"); it != j.end() && it->is_array()) {
      for (const auto& r : *it) {
        if (r.is_string()) texts.push_back(r.get<std::string>());
      }
    }
  });
  return texts;
}

std::string StatsReport::to_json() const {
  json j = json::object();
  j["texts"] = texts;
  j["unique_words"] = stats.unique_words;
  j["pct_capitalized"] = stats.pct_capitalized;
  j["dale_chall"] = dale_chall ? json(*dale_chall) : json(nullptr);
  return j.dump();
}

StatsReport cmd_stats(std::istream& in, CapitalBasis basis) {
  StatsReport r;
  const auto texts = read_texts(in);
  if (texts.empty()) throw Error(ErrorCode::EmptyCorpus, "no texts found");
  r.texts = texts.size();
  r.stats = corpus_stats(texts, basis);
  try {
    r.dale_chall = dale_chall(texts, load_easy_words());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyCorpus) throw;
  }
  return r;
}

}  // namespace d2t
