#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace d2t {

enum class ErrorCode {
  // mr_core
  MalformedTriple,
  EmptyField,
  UnbalancedParens,
  DuplicateVariable,
  DanglingReference,
  MalformedAmr,
  MalformedSlot,
  MalformedAct,
  UnknownAct,
  // linearizer
  UnregisteredSlot,
  DuplicateToken,
  // bpe
  VocabTooSmall,
  InvalidId,
  // sequence
  MissingSpecial,
  EmptyText,
  // corruptor
  CorpusTooSmall,
  // decoder
  EmptyProbList,
  ScorerFailure,
  // toy models
  EmptyCorpus,
  DegenerateCorpus,
  // metrics
  EmptySet,
  IdMismatch,
  MissingData,
  // io
  BadFormat,
  IoFailure,
};

std::string_view error_code_name(ErrorCode code);

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code-name prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace d2t
