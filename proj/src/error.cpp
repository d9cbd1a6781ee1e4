#include "d2t/error.hpp"

namespace d2t {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedTriple: return "MalformedTriple";
    case ErrorCode::EmptyField: return "EmptyField";
    case ErrorCode::UnbalancedParens: return "UnbalancedParens";
    case ErrorCode::DuplicateVariable: return "DuplicateVariable";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::MalformedAmr: return "MalformedAmr";
    case ErrorCode::MalformedSlot: return "MalformedSlot";
    case ErrorCode::MalformedAct: return "MalformedAct";
    case ErrorCode::UnknownAct: return "UnknownAct";
    case ErrorCode::UnregisteredSlot: return "UnregisteredSlot";
    case ErrorCode::DuplicateToken: return "DuplicateToken";
    case ErrorCode::VocabTooSmall: return "VocabTooSmall";
    case ErrorCode::InvalidId: return "InvalidId";
    case ErrorCode::MissingSpecial: return "MissingSpecial";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::CorpusTooSmall: return "CorpusTooSmall";
    case ErrorCode::EmptyProbList: return "EmptyProbList";
    case ErrorCode::ScorerFailure: return "ScorerFailure";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::DegenerateCorpus: return "DegenerateCorpus";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::MissingData: return "MissingData";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace d2t
