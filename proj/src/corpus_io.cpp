#include "d2t/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <json.hpp>

#include "d2t/error.hpp"
#include "d2t/strings.hpp"

namespace d2t {

using nlohmann::json;

std::vector<std::string> CorpusRecord::all_references() const {
  std::vector<std::string> out;
  if (text) out.push_back(*text);
  for (const auto& r : references) {
    if (!text || r != *text) out.push_back(r);
  }
  return out;
}

CorpusRecord parse_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::BadFormat, "record is not a JSON object");
  auto field = [&](const char* name) -> std::string {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string()) throw Error(ErrorCode::BadFormat, std::string("record lacks string field ") + name);
    return it->get<std::string>();
  };
  CorpusRecord rec;
  rec.id = field("id");
  try {
    rec.mr_type = parse_mr_type(field("mr_type"));
  } catch (const Error& e) {
    throw Error(ErrorCode::BadFormat, "record '" + rec.id + "': " + e.detail());
  }
  rec.mr_raw = field("mr_raw");
  if (auto it = j.find("text"); it != j.end() && it->is_string()) rec.text = it->get<std::string>();
  if (auto it = j.find("references"); it != j.end() && it->is_array()) {
    for (const auto& r : *it) {
      if (r.is_string()) rec.references.push_back(r.get<std::string>());
    }
  }
  return rec;
}

std::string record_to_json(const CorpusRecord& rec) {
  json j = json::object();
  j["id"] = rec.id;
  j["mr_type"] = std::string(mr_type_name(rec.mr_type));
  j["mr_raw"] = rec.mr_raw;
  if (rec.text) j["text"] = *rec.text;
  if (!rec.references.empty()) j["references"] = rec.references;
  return j.dump();
}

void for_each_line(std::istream& in, const std::function<void(std::size_t, const std::string&)>& fn) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strings::trim(line).empty()) continue;
    fn(n, line);
  }
}

std::vector<CorpusRecord> read_records(std::istream& in) {
  std::vector<CorpusRecord> out;
  for_each_line(in, [&](std::size_t n, const std::string& line) {
    try {
      out.push_back(parse_record(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(n) + ": " + e.detail());
    }
  });
  return out;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig cfg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::BadFormat, "config must be a JSON object");
  const auto dir = path.parent_path();
  auto as_path = [&](const json& v) {
    std::filesystem::path p = v.get<std::string>();
    return p.is_relative() ? dir / p : p;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "registry") cfg.registry = as_path(v);
      else if (key == "vocab") cfg.vocab = as_path(v);
      else if (key == "lm") cfg.lm = as_path(v);
      else if (key == "sfc") cfg.sfc = as_path(v);
      else if (key == "realization_table") cfg.realization_table = as_path(v);
      else if (key == "beam") cfg.decode.beam_width = v.get<std::size_t>();
      else if (key == "alpha") cfg.decode.alpha = v.get<double>();
      else if (key == "max_tokens") cfg.decode.max_text_tokens = v.get<std::size_t>();
      else if (key == "slot_order") cfg.slot_order = parse_slot_order(v.get<std::string>());
      else if (key == "strict") cfg.strict = v.get<bool>();
      else if (key == "rerank") cfg.rerank = v.get<bool>();
      else if (key == "parallel") cfg.parallel = v.get<bool>();
      else if (key == "vocab_size") cfg.vocab_size = v.get<std::size_t>();
      else if (key == "order") cfg.ngram.order = v.get<std::size_t>();
      else if (key == "smoothing") cfg.ngram.smoothing = v.get<double>();
      else if (key == "epochs") cfg.classifier.epochs = v.get<std::size_t>();
      else if (key == "learning_rate") cfg.classifier.learning_rate = v.get<double>();
      else if (key == "repeat") cfg.repeat_count = v.get<std::size_t>();
      else throw Error(ErrorCode::BadFormat, "unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace d2t
