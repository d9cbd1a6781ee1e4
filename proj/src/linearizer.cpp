#include "d2t/linearizer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include "d2t/error.hpp"
#include "d2t/strings.hpp"

namespace d2t {

// ---------------------------------------------------------------- registry

SpecialTokenRegistry SpecialTokenRegistry::with_defaults() {
  SpecialTokenRegistry reg;
  reg.add("data", std::string(kDataToken));
  reg.add("text", std::string(kTextToken));
  reg.add("eos", std::string(kEosToken));
  reg.add("subject", "<subject>");
  reg.add("predicate", "<predicate>");
  reg.add("object", "<object>");
  return reg;
}

void SpecialTokenRegistry::add(std::string role, std::string surface) {
  if (surface.size() < 3 || surface.front() != '<' || surface.back() != '>') {
    throw Error(ErrorCode::BadFormat, "special token '" + surface + "' must look like <name>");
  }
  if (auto it = by_role_.find(role); it != by_role_.end()) {
    if (it->second == surface) return;
    throw Error(ErrorCode::DuplicateToken, "role '" + role + "' already mapped to " + it->second);
  }
  if (auto it = by_surface_.find(surface); it != by_surface_.end()) {
    throw Error(ErrorCode::DuplicateToken, "token " + surface + " already used by role '" + it->second + "'");
  }
  by_surface_.emplace(surface, role);
  by_role_.emplace(std::move(role), std::move(surface));
}

const std::string& SpecialTokenRegistry::ensure(const std::string& role, const std::string& surface) {
  if (auto it = by_role_.find(role); it != by_role_.end()) return it->second;
  // A surface already owned by another role (a slot named "subject", say)
  // falls back to the role-qualified form.
  add(role, by_surface_.count(surface) ? "<" + role + ">" : surface);
  return by_role_.find(role)->second;
}

std::optional<std::string> SpecialTokenRegistry::lookup(std::string_view role) const {
  auto it = by_role_.find(role);
  if (it == by_role_.end()) return std::nullopt;
  return it->second;
}

bool SpecialTokenRegistry::contains_surface(std::string_view surface) const {
  return by_surface_.find(surface) != by_surface_.end();
}

std::vector<std::string> SpecialTokenRegistry::surfaces() const {
  std::vector<std::string> out;
  out.reserve(by_role_.size());
  for (const auto& [role, surface] : by_role_) out.push_back(surface);
  return out;
}

std::string SpecialTokenRegistry::to_text() const {
  std::string out;
  for (const auto& [role, surface] : by_role_) out += role + "\t" + surface + "\n";
  return out;
}

SpecialTokenRegistry SpecialTokenRegistry::from_text(std::string_view text) {
  SpecialTokenRegistry reg;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorCode::BadFormat, "registry line without tab: " + line);
    reg.add(line.substr(0, tab), line.substr(tab + 1));
  }
  return reg;
}

void SpecialTokenRegistry::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << to_text();
}

SpecialTokenRegistry SpecialTokenRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

SlotOrder parse_slot_order(std::string_view name) {
  if (name == "source") return SlotOrder::Source;
  if (name == "name-first-alphabetical") return SlotOrder::NameFirstAlphabetical;
  throw Error(ErrorCode::BadFormat, "unknown slot order '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- surface transforms

std::string split_camel_case(std::string_view predicate) {
  std::string out;
  for (std::size_t i = 0; i < predicate.size(); ++i) {
    char c = predicate[i];
    if (i > 0 && strings::is_upper(c) && strings::is_lower(predicate[i - 1])) out += ' ';
    out += strings::to_lower(c);
  }
  return out;
}

std::string sentence_case(std::string_view value) {
  std::string out(value);
  std::replace(out.begin(), out.end(), '_', ' ');
  if (!out.empty()) out[0] = strings::to_upper(out[0]);
  return out;
}

std::string strip_sense_suffix(std::string_view concept_name) {
  std::size_t dash = concept_name.rfind('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 == concept_name.size()) {
    return std::string(concept_name);
  }
  for (std::size_t i = dash + 1; i < concept_name.size(); ++i) {
    if (!strings::is_digit(concept_name[i])) return std::string(concept_name);
  }
  return std::string(concept_name.substr(0, dash));
}

// ---------------------------------------------------------------- builder

namespace {

class Builder {
 public:
  Builder& special(const std::string& token) {
    out_.special_positions.push_back({out_.text.size(), token});
    out_.text += token;
    return *this;
  }
  Builder& plain(std::string_view s) {
    out_.text += s;
    return *this;
  }
  LinearizedData finish(MrType type, std::vector<std::string> values) {
    out_.mr_type = type;
    out_.values = std::move(values);
    return std::move(out_);
  }

 private:
  LinearizedData out_;
};

std::string required(const SpecialTokenRegistry& reg, const std::string& role) {
  if (auto s = reg.lookup(role)) return *s;
  throw Error(ErrorCode::UnregisteredSlot, "no special token registered for '" + role + "'");
}

std::string slot_surface(std::string_view name) { return "<" + std::string(name) + ">"; }

std::vector<const Slot*> ordered_slots(const std::vector<Slot>& slots, SlotOrder order) {
  std::vector<const Slot*> out;
  for (const auto& s : slots) out.push_back(&s);
  if (order == SlotOrder::NameFirstAlphabetical) {
    std::stable_sort(out.begin(), out.end(), [](const Slot* a, const Slot* b) {
      const bool an = a->name == "name";
      const bool bn = b->name == "name";
      if (an != bn) return an;
      return a->name < b->name;
    });
  }
  return out;
}

bool is_op_role(std::string_view role) {
  if (role.size() < 4 || role.substr(0, 3) != ":op") return false;
  for (std::size_t i = 3; i < role.size(); ++i) {
    if (!strings::is_digit(role[i])) return false;
  }
  return true;
}

// A (n / name :op1 "United" :op2 "States") node collapses to "United States".
std::optional<std::string> merged_entity(const AmrNode& node) {
  if (node.concept_name != "name" || node.edges.empty()) return std::nullopt;
  std::vector<std::string> parts;
  for (const auto& e : node.edges) {
    if (e.kind != AmrEdgeKind::Attribute || !is_op_role(e.role)) return std::nullopt;
    parts.push_back(e.value);
  }
  return strings::join(parts, " ");
}

bool is_wiki(const AmrEdge& e) { return e.role == ":wiki"; }

std::string amr_role_surface(const SpecialTokenRegistry& reg, const std::string& role) {
  if (auto s = reg.lookup("amr:" + role)) return *s;
  return "<" + role + ">";
}

void render_amr(const AmrGraph& g, std::size_t idx, const SpecialTokenRegistry& reg, Builder& b) {
  const AmrNode& node = g.nodes[idx];
  if (auto entity = merged_entity(node)) {
    b.plain("(").plain(*entity).plain(")");
    return;
  }
  b.plain("(").plain(strip_sense_suffix(node.concept_name));
  for (const auto& e : node.edges) {
    if (is_wiki(e)) continue;
    b.plain(" ").special(amr_role_surface(reg, e.role)).plain(" ");
    switch (e.kind) {
      case AmrEdgeKind::Child: render_amr(g, e.target, reg, b); break;
      case AmrEdgeKind::Reentrancy:
        b.plain("(").plain(strip_sense_suffix(g.nodes[e.target].concept_name)).plain(")");
        break;
      case AmrEdgeKind::Attribute: b.plain(e.value); break;
    }
  }
  b.plain(")");
}

void collect_amr_values(const AmrGraph& g, std::size_t idx, std::vector<std::string>& out) {
  const AmrNode& node = g.nodes[idx];
  if (auto entity = merged_entity(node)) {
    out.push_back(*entity);
    return;
  }
  bool leaf = true;
  for (const auto& e : node.edges) {
    if (is_wiki(e)) continue;
    leaf = false;
    if (e.kind == AmrEdgeKind::Child) collect_amr_values(g, e.target, out);
    else if (e.kind == AmrEdgeKind::Attribute && !e.value.empty()) out.push_back(e.value);
  }
  if (leaf) out.push_back(strip_sense_suffix(node.concept_name));
}

std::vector<std::string> triple_values(const TripleSet& mr) {
  std::vector<std::string> out;
  for (const auto& t : mr.triples) {
    out.push_back(sentence_case(t.subject));
    out.push_back(sentence_case(t.object));
  }
  return out;
}

std::vector<std::string> slot_values(const std::vector<Slot>& slots) {
  std::vector<std::string> out;
  for (const auto& s : slots) {
    if (!s.value.empty()) out.push_back(s.value);
  }
  return out;
}

}  // namespace

LinearizedData linearize_triples(const TripleSet& mr, const SpecialTokenRegistry& reg) {
  const std::string subj = required(reg, "subject");
  const std::string pred = required(reg, "predicate");
  const std::string obj = required(reg, "object");
  Builder b;
  for (std::size_t i = 0; i < mr.triples.size(); ++i) {
    const auto& t = mr.triples[i];
    if (i) b.plain(" ");
    b.special(subj).plain(" ").plain(sentence_case(t.subject)).plain(" ");
    b.special(pred).plain(" ").plain(split_camel_case(t.predicate)).plain(" ");
    b.special(obj).plain(" ").plain(sentence_case(t.object));
  }
  return b.finish(MrType::Triples, triple_values(mr));
}

LinearizedData linearize_amr(const AmrGraph& mr, const SpecialTokenRegistry& reg) {
  Builder b;
  std::vector<std::string> values;
  if (!mr.nodes.empty()) {
    render_amr(mr, 0, reg, b);
    collect_amr_values(mr, 0, values);
  }
  return b.finish(MrType::Amr, std::move(values));
}

LinearizedData linearize_slots(const SlotValueMr& mr, const SpecialTokenRegistry& reg,
                               const LinearizeOptions& opts) {
  Builder b;
  bool first = true;
  for (const Slot* s : ordered_slots(mr.slots, opts.slot_order)) {
    if (!first) b.plain(" ");
    first = false;
    b.special(required(reg, "slot:" + s->name)).plain(" ").plain(s->name).plain("=[").plain(s->value).plain("];");
  }
  return b.finish(MrType::Slots, slot_values(mr.slots));
}

LinearizedData linearize_dialogue_act(const DialogueActMr& mr, const SpecialTokenRegistry& reg,
                                      const LinearizeOptions& opts) {
  const std::string act = required(reg, "act:" + mr.act);
  Builder b;
  b.special(act).plain(" ").plain(mr.act).plain(" (");
  bool first = true;
  for (const Slot* s : ordered_slots(mr.slots, opts.slot_order)) {
    if (!first) b.plain(", ");
    first = false;
    b.special(required(reg, "slot:" + s->name)).plain(" ").plain(s->name).plain(": [").plain(s->value).plain("]");
  }
  if (!mr.slots.empty()) b.plain(" ");
  b.special(act).plain(")");
  return b.finish(MrType::DialogueAct, slot_values(mr.slots));
}

LinearizedData linearize(const MeaningRepresentation& mr, const SpecialTokenRegistry& reg,
                         const LinearizeOptions& opts) {
  switch (mr.type()) {
    case MrType::Triples: return linearize_triples(mr.as<TripleSet>(), reg);
    case MrType::Amr: return linearize_amr(mr.as<AmrGraph>(), reg);
    case MrType::Slots: return linearize_slots(mr.as<SlotValueMr>(), reg, opts);
    case MrType::DialogueAct: return linearize_dialogue_act(mr.as<DialogueActMr>(), reg, opts);
  }
  throw Error(ErrorCode::BadFormat, "unknown mr type");
}

LinearizedData linearize(const MeaningRepresentation& mr, SpecialTokenRegistry& reg,
                         const LinearizeOptions& opts) {
  if (opts.auto_register) register_specials(mr, reg);
  return linearize(mr, std::as_const(reg), opts);
}

void register_specials(const MeaningRepresentation& mr, SpecialTokenRegistry& reg) {
  auto add_slots = [&](const std::vector<Slot>& slots) {
    for (const auto& s : slots) reg.ensure("slot:" + s.name, slot_surface(s.name));
  };
  switch (mr.type()) {
    case MrType::Triples:
      reg.ensure("subject", "<subject>");
      reg.ensure("predicate", "<predicate>");
      reg.ensure("object", "<object>");
      break;
    case MrType::Amr:
      for (const auto& node : mr.as<AmrGraph>().nodes) {
        if (merged_entity(node)) continue;
        for (const auto& e : node.edges) {
          if (!is_wiki(e)) reg.ensure("amr:" + e.role, "<" + e.role + ">");
        }
      }
      break;
    case MrType::Slots: add_slots(mr.as<SlotValueMr>().slots); break;
    case MrType::DialogueAct: {
      const auto& da = mr.as<DialogueActMr>();
      reg.ensure("act:" + da.act, slot_surface(da.act));
      add_slots(da.slots);
      break;
    }
  }
}

std::vector<std::string> extract_values(const MeaningRepresentation& mr) {
  switch (mr.type()) {
    case MrType::Triples: return triple_values(mr.as<TripleSet>());
    case MrType::Amr: {
      std::vector<std::string> out;
      const auto& g = mr.as<AmrGraph>();
      if (!g.nodes.empty()) collect_amr_values(g, 0, out);
      return out;
    }
    case MrType::Slots: return slot_values(mr.as<SlotValueMr>().slots);
    case MrType::DialogueAct: return slot_values(mr.as<DialogueActMr>().slots);
  }
  return {};
}

}  // namespace d2t
