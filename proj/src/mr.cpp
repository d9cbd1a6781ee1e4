#include "d2t/mr.hpp"

#include <unordered_set>

#include "d2t/error.hpp"
#include "d2t/strings.hpp"

namespace d2t {

using strings::trim;

bool SlotValueMr::has_duplicate_names() const {
  std::unordered_set<std::string> seen;
  for (const auto& s : slots) {
    if (!seen.insert(s.name).second) return true;
  }
  return false;
}

std::optional<std::size_t> AmrGraph::find_variable(std::string_view var) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].variable == var) return i;
  }
  return std::nullopt;
}

std::string_view mr_type_name(MrType type) {
  switch (type) {
    case MrType::Triples: return "triples";
    case MrType::Amr: return "amr";
    case MrType::Slots: return "slots";
    case MrType::DialogueAct: return "dialogue_act";
  }
  return "unknown";
}

MrType parse_mr_type(std::string_view name) {
  if (name == "triples") return MrType::Triples;
  if (name == "amr") return MrType::Amr;
  if (name == "slots") return MrType::Slots;
  if (name == "dialogue_act") return MrType::DialogueAct;
  throw Error(ErrorCode::BadFormat, "unknown mr_type '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- triples

TripleSet parse_triples(std::string_view raw, const TripleParseOptions& opts) {
  TripleSet out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t end = raw.find(opts.record_delimiter, start);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view record = trim(raw.substr(start, end - start));
    start = end + 1;
    if (record.empty()) continue;

    std::size_t p1 = record.find('|');
    std::size_t p2 = p1 == std::string_view::npos ? p1 : record.find('|', p1 + 1);
    if (p2 == std::string_view::npos || record.find('|', p2 + 1) != std::string_view::npos) {
      throw Error(ErrorCode::MalformedTriple,
                  "expected exactly two '|' separators in '" + std::string(record) + "'");
    }
    Triple t{std::string(trim(record.substr(0, p1))),
             std::string(trim(record.substr(p1 + 1, p2 - p1 - 1))),
             std::string(trim(record.substr(p2 + 1)))};
    if (t.subject.empty() || t.predicate.empty() || t.object.empty()) {
      throw Error(ErrorCode::EmptyField, "empty field in '" + std::string(record) + "'");
    }
    out.triples.push_back(std::move(t));
  }
  if (out.triples.empty()) throw Error(ErrorCode::MalformedTriple, "no triples in input");
  return out;
}

std::string serialize_triples(const TripleSet& mr, const TripleParseOptions& opts) {
  std::string out;
  for (std::size_t i = 0; i < mr.triples.size(); ++i) {
    if (i) out += opts.record_delimiter;
    const auto& t = mr.triples[i];
    out += t.subject + " | " + t.predicate + " | " + t.object;
  }
  return out;
}

// ---------------------------------------------------------------- slots

namespace {

std::vector<Slot> parse_slot_list(std::string_view raw) {
  std::vector<Slot> slots;
  std::vector<std::string_view> items;
  int depth = 0;
  std::size_t item_start = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c == '[') {
      if (++depth > 1) throw Error(ErrorCode::MalformedSlot, "nested '[' in slot list");
    } else if (c == ']') {
      if (--depth < 0) throw Error(ErrorCode::MalformedSlot, "unmatched ']' in slot list");
    } else if (c == ',' && depth == 0) {
      items.push_back(raw.substr(item_start, i - item_start));
      item_start = i + 1;
    }
  }
  if (depth != 0) throw Error(ErrorCode::MalformedSlot, "unclosed '[' in slot list");
  items.push_back(raw.substr(item_start));

  for (std::string_view item : items) {
    item = trim(item);
    std::size_t open = item.find('[');
    if (item.empty() || open == std::string_view::npos || item.back() != ']') {
      throw Error(ErrorCode::MalformedSlot, "expected name[value], got '" + std::string(item) + "'");
    }
    std::string_view name = trim(item.substr(0, open));
    if (name.empty()) throw Error(ErrorCode::MalformedSlot, "empty slot name in '" + std::string(item) + "'");
    slots.push_back({std::string(name), std::string(item.substr(open + 1, item.size() - open - 2))});
  }
  return slots;
}

std::string serialize_slot_list(const std::vector<Slot>& slots) {
  std::string out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i) out += ", ";
    out += slots[i].name + "[" + slots[i].value + "]";
  }
  return out;
}

}  // namespace

SlotValueMr parse_slot_mr(std::string_view raw) {
  raw = trim(raw);
  if (raw.empty()) throw Error(ErrorCode::MalformedSlot, "empty slot MR");
  return SlotValueMr{parse_slot_list(raw)};
}

std::string serialize_slot_mr(const SlotValueMr& mr) { return serialize_slot_list(mr.slots); }

// ---------------------------------------------------------------- dialogue acts

DialogueActMr parse_dialogue_act(std::string_view raw, const std::set<std::string>& act_inventory) {
  raw = trim(raw);
  std::size_t open = raw.find('(');
  if (open == std::string_view::npos || raw.empty() || raw.back() != ')') {
    throw Error(ErrorCode::MalformedAct, "expected act(slot[value], ...), got '" + std::string(raw) + "'");
  }
  std::string_view act = trim(raw.substr(0, open));
  if (act.empty()) throw Error(ErrorCode::MalformedAct, "empty dialogue act name");
  for (char c : act) {
    if (strings::is_space(c) || c == '[' || c == ']' || c == ')') {
      throw Error(ErrorCode::MalformedAct, "invalid act name '" + std::string(act) + "'");
    }
  }
  std::string_view inner = trim(raw.substr(open + 1, raw.size() - open - 2));
  if (inner.find('(') != std::string_view::npos || inner.find(')') != std::string_view::npos) {
    throw Error(ErrorCode::MalformedAct, "unbalanced parentheses in '" + std::string(raw) + "'");
  }
  if (!act_inventory.empty() && !act_inventory.count(std::string(act))) {
    throw Error(ErrorCode::UnknownAct, "act '" + std::string(act) + "' not in inventory");
  }
  DialogueActMr out;
  out.act = std::string(act);
  if (!inner.empty()) {
    try {
      out.slots = parse_slot_list(inner);
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedAct, e.what());
    }
  }
  return out;
}

std::string serialize_dialogue_act(const DialogueActMr& mr) {
  return mr.act + "(" + serialize_slot_list(mr.slots) + ")";
}

// ---------------------------------------------------------------- dispatch

MeaningRepresentation parse_mr(MrType type, std::string_view raw) {
  switch (type) {
    case MrType::Triples: return parse_triples(raw);
    case MrType::Amr: return parse_amr(raw);
    case MrType::Slots: return parse_slot_mr(raw);
    case MrType::DialogueAct: return parse_dialogue_act(raw);
  }
  throw Error(ErrorCode::BadFormat, "unknown mr type");
}

std::string serialize_mr(const MeaningRepresentation& mr) {
  switch (mr.type()) {
    case MrType::Triples: return serialize_triples(mr.as<TripleSet>());
    case MrType::Amr: return serialize_amr(mr.as<AmrGraph>());
    case MrType::Slots: return serialize_slot_mr(mr.as<SlotValueMr>());
    case MrType::DialogueAct: return serialize_dialogue_act(mr.as<DialogueActMr>());
  }
  return {};
}

}  // namespace d2t
