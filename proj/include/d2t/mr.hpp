#pragma once

// Typed meaning representations for the four dataset families and parsers
// from their raw record serializations.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace d2t {

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;

  bool operator==(const Triple&) const = default;
};

struct TripleSet {
  std::vector<Triple> triples;

  bool operator==(const TripleSet&) const = default;
};

struct Slot {
  std::string name;
  std::string value;

  bool operator==(const Slot&) const = default;
};

struct SlotValueMr {
  std::vector<Slot> slots;

  /// Duplicate slot names are legal but worth surfacing to callers.
  bool has_duplicate_names() const;

  bool operator==(const SlotValueMr&) const = default;
};

struct DialogueActMr {
  std::string act;
  std::vector<Slot> slots;

  bool operator==(const DialogueActMr&) const = default;
};

// AMR graphs are stored as a node arena; index 0 is the root. Edges keep the
// source order of roles so that serialization and linearization are stable.
enum class AmrEdgeKind { Child, Attribute, Reentrancy };

struct AmrEdge {
  std::string role;  // always begins with ':'
  AmrEdgeKind kind = AmrEdgeKind::Attribute;
  std::size_t target = 0;  // node index for Child and Reentrancy
  std::string value;       // literal text for Attribute (quotes stripped)
  bool quoted = false;     // Attribute was a quoted string literal

  bool operator==(const AmrEdge&) const = default;
};

struct AmrNode {
  std::string variable;
  std::string concept_name;  // sense suffix retained, e.g. "respond-01"
  std::vector<AmrEdge> edges;

  bool operator==(const AmrNode&) const = default;
};

struct AmrGraph {
  std::vector<AmrNode> nodes;

  const AmrNode& root() const { return nodes.front(); }
  std::optional<std::size_t> find_variable(std::string_view var) const;

  bool operator==(const AmrGraph&) const = default;
};

enum class MrType { Triples, Amr, Slots, DialogueAct };

std::string_view mr_type_name(MrType type);
/// Accepts the CLI/JSONL spellings: triples, amr, slots, dialogue_act.
MrType parse_mr_type(std::string_view name);

class MeaningRepresentation {
 public:
  using Payload = std::variant<TripleSet, AmrGraph, SlotValueMr, DialogueActMr>;

  MeaningRepresentation(TripleSet v) : payload_(std::move(v)) {}
  MeaningRepresentation(AmrGraph v) : payload_(std::move(v)) {}
  MeaningRepresentation(SlotValueMr v) : payload_(std::move(v)) {}
  MeaningRepresentation(DialogueActMr v) : payload_(std::move(v)) {}

  MrType type() const { return static_cast<MrType>(payload_.index()); }
  const Payload& payload() const { return payload_; }

  template <class T>
  const T& as() const {
    return std::get<T>(payload_);
  }

  bool operator==(const MeaningRepresentation&) const = default;

 private:
  Payload payload_;
};

struct TripleParseOptions {
  char record_delimiter = '\n';
};

TripleSet parse_triples(std::string_view raw, const TripleParseOptions& opts = {});
AmrGraph parse_amr(std::string_view raw);
SlotValueMr parse_slot_mr(std::string_view raw);
/// When `act_inventory` is non-empty, acts outside it raise UnknownAct.
DialogueActMr parse_dialogue_act(std::string_view raw,
                                 const std::set<std::string>& act_inventory = {});

MeaningRepresentation parse_mr(MrType type, std::string_view raw);

std::string serialize_triples(const TripleSet& mr, const TripleParseOptions& opts = {});
std::string serialize_amr(const AmrGraph& mr);
std::string serialize_slot_mr(const SlotValueMr& mr);
std::string serialize_dialogue_act(const DialogueActMr& mr);
std::string serialize_mr(const MeaningRepresentation& mr);

/// Structural equality up to variable renaming.
bool amr_isomorphic(const AmrGraph& a, const AmrGraph& b);

}  // namespace d2t
