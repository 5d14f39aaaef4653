#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infothermo {

enum class ErrorCode {
  invalid_argument,
  invalid_convention,
  efficiency_undefined,
  degenerate_state,
  crlb_violation,
  infeasible_process,
  not_a_cycle,
  infeasible_budget,
  no_feasible_path,
  undefined_ratio,
  no_stationary_direction,
  not_closed,
  precondition_violation,
  insufficient_data,
  insufficient_variation,
  degenerate_ensemble,
  empty_input,
  parse_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain error raised by every module. The message is meant to be shown to
/// users verbatim; the code lets callers branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace infothermo
