#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cantorgap {

enum class ErrorCode {
  DegenerateInput,
  EmptyRegionList,
  InvalidSpec,
  DomainEscape,
  BudgetExceeded,
  TailBoundUnavailable,
  DivergentRecursion,
  MismatchedSquares,
  HypothesisViolated,
  CaseSelectionAmbiguous,
  NoGaps,
  NonpositiveTau,
  InvalidParams,
  ContainmentLost,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure the library reports carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cantorgap
