#include "dsm/error.hpp"

namespace dsm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::PreconditionViolated: return "precondition-failure";
    case ErrorKind::AssumptionFailure: return "assumption-failure";
    case ErrorKind::ConvergenceFailure: return "convergence-failure";
    case ErrorKind::NoRoot: return "no-root";
    case ErrorKind::Validation: return "validation-error";
  }
  return "unknown-error";
}

}  // namespace dsm
