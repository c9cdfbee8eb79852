#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsm {

enum class ErrorKind {
  InvalidInput,         // malformed or non-finite data
  InvalidParameter,     // e.g. a regularization value a <= 0
  NumericalFailure,     // SVD non-convergence, non-finite quadrature
  PreconditionViolated, // ||f_delta|| <= C delta^eps and similar hypotheses
  AssumptionFailure,    // alpha0 could not be chosen so that G_1 > C delta^eps
  ConvergenceFailure,   // every Newton restart failed
  NoRoot,               // discrepancy equation has no positive root
  Validation,           // experiment/config/CLI level validation
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dsm
