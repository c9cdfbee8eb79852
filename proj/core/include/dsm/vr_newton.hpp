#pragma once

// Variational regularization baseline: the Tikhonov solution u(a) with a
// chosen from ||A u(a) - f_delta||^2 = (C delta)^2 by undamped Newton,
// restarting from alpha0 / 2^k until an attempt converges.

#include "dsm/linalg.hpp"

namespace dsm {

struct VrConfig {
  double alpha0 = 1.0;
  double C = 1.01;
  double delta = 0.0;
  double newton_tol_factor = 1e-3;
  int max_newton_iters = 50;
  int max_halvings = 40;

  void validate() const;
};

struct VrReport {
  Vector solution;
  double a_final = 0.0;
  int k_delta = 0;       // halvings used
  int newton_iters = 0;  // Newton updates in the accepted attempt
  bool converged = false;
};

/// ||A T_a^{-1} A^T f - f||^2 - (C delta)^2.
double phi(const SpectralFactors& f, double a, const Vector& f_noisy, double C, double delta);

/// d phi / da = sum_i 2 a sigma_i^2 beta_i^2 / (sigma_i^2 + a)^3, beta = U^T f.
double phi_prime(const SpectralFactors& f, double a, const Vector& f_noisy);

/// Throws NoRoot when ||f_noisy|| <= C delta and ConvergenceFailure when every
/// restart fails.
VrReport vr_solve(const SpectralFactors& f, const Vector& f_noisy, const VrConfig& cfg);

}  // namespace dsm
