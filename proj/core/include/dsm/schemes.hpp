#pragma once

// Iterative DSM schemes driven by the geometric regularization schedule
// a_n = alpha0 * q^n, with a posteriori discrepancy-type stopping.
//
//   IS1:  u_{n+1} = q u_n + (1 - q) T_{a_{n+1}}^{-1} A^T f,     u_0 = 0
//         stops at the first n with G_n <= C delta^eps, where
//         G_n = q G_{n-1} + (1 - q) a_n ||Q_{a_n}^{-1} f||,     G_0 = 0.
//
//   IS2:  u_{n+1} = a_n T_{a_n}^{-1} u_n + T_{a_n}^{-1} A^T f,  u_1 = 0
//         stops at the first n with W_n = a_n ||Q_{a_n}^{-1} f|| <= C delta^eps.
//
// T_a = A^T A + aI and Q_a = A A^T + aI.

#include "dsm/linalg.hpp"

#include <cmath>
#include <string_view>
#include <vector>

namespace dsm {

struct SchemeConfig {
  double q = 0.25;
  double alpha0 = 1.0;
  double C = 1.01;
  double eps = 0.99;
  int n_max = 200;
  double delta = 0.0;  // noise level; 0 only for fixed-count exact runs
  bool capture_iterates = false;

  /// Throws InvalidParameter when a field is out of range.
  void validate() const;

  /// C * delta^eps.
  double threshold() const { return C * std::pow(delta, eps); }

  /// alpha0 * q^n.
  double schedule(int n) const { return alpha0 * std::pow(q, n); }
};

struct IterationRecord {
  int n = 0;
  double a = 0.0;            // regularization value used at this step
  double stat = 0.0;         // G_n (IS1) or W_n (IS2)
  double update_norm = 0.0;  // ||u_new - u_old||
};

using IterationTrace = std::vector<IterationRecord>;

enum class StopReason {
  DiscrepancyMet,
  CapReached,
  AssumptionAdjustedThenMet,  // alpha0 had to be doubled before iterating
  FixedCount,                 // exact-data run with a caller-given step count
};

std::string_view to_string(StopReason reason) noexcept;

struct SolveReport {
  Vector solution;
  int stop_index = 0;
  StopReason stop_reason = StopReason::DiscrepancyMet;
  IterationTrace trace;
  double alpha0_used = 0.0;
  std::vector<Vector> iterates;  // filled only with capture_iterates
};

/// One IS1 step: q u + (1 - q) T_{alpha0 q^{n+1}}^{-1} A^T f.
Vector is1_step(const SpectralFactors& f, const Vector& u, int n, const SchemeConfig& cfg,
                const Vector& f_noisy);

/// Weight q^{n-j-1} - q^{n-j} of the j-th term in the closed-form IS1 iterate.
inline double closed_form_weight(int n, int j, double q) {
  return std::pow(q, n - j - 1) - std::pow(q, n - j);
}

/// u_n = sum_{j=0}^{n-1} (q^{n-j-1} - q^{n-j}) T_{alpha0 q^{j+1}}^{-1} A^T f.
Vector closed_form_iterate(const SpectralFactors& f, int n, const SchemeConfig& cfg,
                           const Vector& data);

/// G_n = q G_{n-1} + (1 - q) alpha0 q^n ||Q_{alpha0 q^n}^{-1} f||.
double g_stat_step(const SpectralFactors& f, double g_prev, int n, const SchemeConfig& cfg,
                   const Vector& f_noisy);

/// IS1 with the G_n stopping rule. When (1-q) alpha0 q ||Q^{-1} f|| does not
/// exceed C delta^eps, alpha0 is doubled (up to 60 times) first.
SolveReport is1_solve(const SpectralFactors& f, const Vector& f_noisy, const SchemeConfig& cfg);

/// One IS2 step from u_n to u_{n+1}, with a_n = alpha0 q^n.
Vector is2_step(const SpectralFactors& f, const Vector& u, int n, const SchemeConfig& cfg,
                const Vector& f_noisy);

/// IS2 with the W_n stopping rule. The returned solution is the iterate
/// produced with a_{n_delta}, the parameter whose residual met the rule.
SolveReport is2_solve(const SpectralFactors& f, const Vector& f_noisy, const SchemeConfig& cfg);

/// Exact-data runs: `steps` iterations with no stopping rule. cfg.delta is
/// ignored. With capture_iterates, iterates[k] is the result after k+1 steps.
SolveReport is1_run(const SpectralFactors& f, const Vector& data, const SchemeConfig& cfg,
                    int steps);
SolveReport is2_run(const SpectralFactors& f, const Vector& data, const SchemeConfig& cfg,
                    int steps);

/// sum_{j=1}^{n-1} (q^{n-j-1} - q^{n-j}) g(c q^{j+1}); tends to g(0+) as n grows.
template <typename Fn>
double schedule_average(Fn&& g, double c, double q, int n) {
  double total = 0.0;
  for (int j = 1; j <= n - 1; ++j) {
    total += closed_form_weight(n, j, q) * g(c * std::pow(q, j + 1));
  }
  return total;
}

}  // namespace dsm
