#include "d2t/contracts.hpp"

#include "d2t/error.hpp"

namespace d2t {

std::string_view label_name(Label label) {
  switch (label) {
    case Label::Accurate: return "accurate";
    case Label::Omission: return "omission";
    case Label::Repetition: return "repetition";
    case Label::Hallucination: return "hallucination";
    case Label::ValueError: return "value_error";
  }
  return "unknown";
}

Label parse_label(std::string_view name) {
  for (Label l : kAllLabels) {
    if (label_name(l) == name) return l;
  }
  throw Error(ErrorCode::BadFormat, "unknown label '" + std::string(name) + "'");
}

}  // namespace d2t
