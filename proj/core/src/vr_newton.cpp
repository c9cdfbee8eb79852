#include "dsm/vr_newton.hpp"

#include "dsm/error.hpp"

#include <cmath>
#include <string>

namespace dsm {

namespace {

double phi_from_coefficients(const SpectralFactors& f, double a, const Vector& beta,
                             double target) {
  const double r = spectral::discrepancy_norm(f, a, beta);
  return r * r - target;
}

double phi_prime_from_coefficients(const SpectralFactors& f, double a, const Vector& beta) {
  const Eigen::ArrayXd s2 = f.singular_values().array().square();
  const Eigen::ArrayXd denom = s2 + a;
  return (2.0 * a * s2 * beta.array().square() / (denom * denom * denom)).sum();
}

}  // namespace

void VrConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidParameter, msg); };
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) fail("VrConfig: alpha0 must be positive");
  if (!(C > 1.0) || !std::isfinite(C)) fail("VrConfig: C must exceed 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) fail("VrConfig: delta must be positive");
  if (!(newton_tol_factor > 0.0)) fail("VrConfig: newton_tol_factor must be positive");
  if (max_newton_iters < 1) fail("VrConfig: max_newton_iters must be positive");
  if (max_halvings < 1) fail("VrConfig: max_halvings must be positive");
}

double phi(const SpectralFactors& f, double a, const Vector& f_noisy, double C, double delta) {
  require_positive_parameter(a, "phi");
  const double cd = C * delta;
  return phi_from_coefficients(f, a, f.data_coefficients(f_noisy), cd * cd);
}

double phi_prime(const SpectralFactors& f, double a, const Vector& f_noisy) {
  require_positive_parameter(a, "phi_prime");
  return phi_prime_from_coefficients(f, a, f.data_coefficients(f_noisy));
}

VrReport vr_solve(const SpectralFactors& f, const Vector& f_noisy, const VrConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(f_noisy.size()) != f.size()) {
    throw Error(ErrorKind::InvalidInput, "vr_solve: vector length does not match m");
  }
  require_finite(f_noisy, "vr_solve");
  const double cd = cfg.C * cfg.delta;
  if (!(f_noisy.norm() > cd)) {
    throw Error(ErrorKind::NoRoot, "vr_solve: ||f_delta|| <= C delta, no positive root");
  }
  const double target = cd * cd;
  const double tolerance = cfg.newton_tol_factor * target;
  const Vector beta = f.data_coefficients(f_noisy);

  for (int k = 0; k <= cfg.max_halvings; ++k) {
    double a = std::ldexp(cfg.alpha0, -k);
    for (int it = 0; it <= cfg.max_newton_iters; ++it) {
      const double value = phi_from_coefficients(f, a, beta, target);
      if (!std::isfinite(value)) break;
      if (std::abs(value) <= tolerance) {
        VrReport report;
        report.solution = spectral::reg_solve_T(f, a, beta);
        report.a_final = a;
        report.k_delta = k;
        report.newton_iters = it;
        report.converged = true;
        return report;
      }
      if (it == cfg.max_newton_iters) break;
      const double slope = phi_prime_from_coefficients(f, a, beta);
      if (!(slope != 0.0) || !std::isfinite(slope)) break;
      a -= value / slope;
      if (!(a > 0.0) || !std::isfinite(a)) break;
    }
  }
  throw Error(ErrorKind::ConvergenceFailure,
              "vr_solve: Newton failed from alpha0 / 2^k for every k <= " +
                  std::to_string(cfg.max_halvings));
}

}  // namespace dsm
