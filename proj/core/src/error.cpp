#include "infothermo/error.hpp"

namespace infothermo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_convention: return "invalid-convention";
    case ErrorCode::efficiency_undefined: return "efficiency-undefined";
    case ErrorCode::degenerate_state: return "degenerate-state";
    case ErrorCode::crlb_violation: return "crlb-violation";
    case ErrorCode::infeasible_process: return "infeasible-process";
    case ErrorCode::not_a_cycle: return "not-a-cycle";
    case ErrorCode::infeasible_budget: return "infeasible-budget";
    case ErrorCode::no_feasible_path: return "no-feasible-path";
    case ErrorCode::undefined_ratio: return "undefined-ratio";
    case ErrorCode::no_stationary_direction: return "no-stationary-direction";
    case ErrorCode::not_closed: return "not-closed";
    case ErrorCode::precondition_violation: return "precondition-violation";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::insufficient_variation: return "insufficient-variation";
    case ErrorCode::degenerate_ensemble: return "degenerate-ensemble";
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace infothermo
