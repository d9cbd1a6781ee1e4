#pragma once

// Renders meaning representations as flat token templates with structural
// special tokens ("<subject> Aarhus <predicate> leader name ...").

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2t/mr.hpp"

namespace d2t {

/// Maps a structural role to the surface form of its special token.
///
/// Role keys are namespaced so that dataset vocabularies cannot collide:
/// "data", "text", "eos", "subject", "predicate", "object", "slot:<name>",
/// "act:<name>" and "amr:<role>". Surfaces are unique and always "<...>".
class SpecialTokenRegistry {
 public:
  /// Registry holding data, text, eos, subject, predicate and object.
  static SpecialTokenRegistry with_defaults();

  void add(std::string role, std::string surface);
  /// Registers `role` with `surface` (or "<role>" if another role owns
  /// `surface`) unless already present; returns the stored surface.
  const std::string& ensure(const std::string& role, const std::string& surface);

  std::optional<std::string> lookup(std::string_view role) const;
  bool contains_surface(std::string_view surface) const;
  std::size_t size() const { return by_role_.size(); }

  /// All surfaces in role-key order.
  std::vector<std::string> surfaces() const;
  const std::map<std::string, std::string, std::less<>>& entries() const { return by_role_; }

  /// "role<TAB>token" per line, sorted by role.
  std::string to_text() const;
  static SpecialTokenRegistry from_text(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static SpecialTokenRegistry load(const std::filesystem::path& path);

  bool operator==(const SpecialTokenRegistry&) const = default;

 private:
  std::map<std::string, std::string, std::less<>> by_role_;
  std::map<std::string, std::string, std::less<>> by_surface_;
};

inline constexpr std::string_view kDataToken = "<data>";
inline constexpr std::string_view kTextToken = "<text>";
inline constexpr std::string_view kEosToken = "<eos>";

struct SpecialPosition {
  std::size_t offset;
  std::string token;

  bool operator==(const SpecialPosition&) const = default;
};

struct LinearizedData {
  std::string text;
  std::vector<SpecialPosition> special_positions;
  /// The MR's values as rendered in `text` (see extract_values). Carried so
  /// that fidelity classifiers can work from the linearization alone.
  std::vector<std::string> values;
  MrType mr_type = MrType::Triples;

  bool operator==(const LinearizedData&) const = default;
};

enum class SlotOrder { Source, NameFirstAlphabetical };

SlotOrder parse_slot_order(std::string_view name);

struct LinearizeOptions {
  SlotOrder slot_order = SlotOrder::Source;
  /// Register unseen slot/act/AMR-role tokens instead of failing. Only the
  /// mutable-registry overloads honour this.
  bool auto_register = false;
};

LinearizedData linearize_triples(const TripleSet& mr, const SpecialTokenRegistry& reg);
LinearizedData linearize_amr(const AmrGraph& mr, const SpecialTokenRegistry& reg);
LinearizedData linearize_slots(const SlotValueMr& mr, const SpecialTokenRegistry& reg,
                               const LinearizeOptions& opts = {});
LinearizedData linearize_dialogue_act(const DialogueActMr& mr, const SpecialTokenRegistry& reg,
                                      const LinearizeOptions& opts = {});

LinearizedData linearize(const MeaningRepresentation& mr, const SpecialTokenRegistry& reg,
                         const LinearizeOptions& opts = {});
/// Registers any missing tokens first when `opts.auto_register` is set.
LinearizedData linearize(const MeaningRepresentation& mr, SpecialTokenRegistry& reg,
                         const LinearizeOptions& opts);

/// Adds every special token `mr` needs to `reg`.
void register_specials(const MeaningRepresentation& mr, SpecialTokenRegistry& reg);

/// Values a value-error corruption may swap: slot values, AMR leaves, or
/// triple subjects and objects, each in its linearized surface form.
std::vector<std::string> extract_values(const MeaningRepresentation& mr);

// Surface transforms used by the triple linearizer.
std::string split_camel_case(std::string_view predicate);
std::string sentence_case(std::string_view value);
std::string strip_sense_suffix(std::string_view concept_name);

}  // namespace d2t
