#include "dsm/schemes.hpp"

#include "dsm/error.hpp"

#include <string>

namespace dsm {

namespace {

constexpr int kMaxAlphaDoublings = 60;

void require_length(const SpectralFactors& f, const Vector& v, const char* what) {
  if (static_cast<std::size_t>(v.size()) != f.size()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": vector length does not match m");
  }
  require_finite(v, what);
}

void require_noisy_data(const SpectralFactors& f, const Vector& f_noisy, const SchemeConfig& cfg,
                        const char* what) {
  cfg.validate();
  require_length(f, f_noisy, what);
  if (!(cfg.delta > 0.0)) {
    throw Error(ErrorKind::InvalidParameter,
                std::string(what) + ": the discrepancy rule needs delta > 0");
  }
  if (!(f_noisy.norm() > cfg.threshold())) {
    throw Error(ErrorKind::PreconditionViolated,
                std::string(what) + ": ||f_delta|| = " + std::to_string(f_noisy.norm()) +
                    " does not exceed C delta^eps = " + std::to_string(cfg.threshold()));
  }
}

// IS2 update with precomputed beta = U^T f.
Vector is2_update(const SpectralFactors& f, const Vector& u, double a, const Vector& beta) {
  const Vector& s = f.singular_values();
  const Eigen::MatrixXd& v = f.right_vectors();
  Eigen::ArrayXd denom = s.array().square() + a;
  Vector c = v.transpose() * u;
  c = ((a * c.array() + s.array() * beta.array()) / denom).matrix();
  return v * c;
}

}  // namespace

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::DiscrepancyMet: return "discrepancy-met";
    case StopReason::CapReached: return "cap-reached";
    case StopReason::AssumptionAdjustedThenMet: return "assumption-adjusted-then-met";
    case StopReason::FixedCount: return "fixed-count";
  }
  return "unknown";
}

void SchemeConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidParameter, msg); };
  if (!(q > 0.0 && q < 1.0)) fail("SchemeConfig: q must lie in (0, 1)");
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) fail("SchemeConfig: alpha0 must be positive");
  if (!(C > 1.0) || !std::isfinite(C)) fail("SchemeConfig: C must exceed 1");
  if (!(eps > 0.0 && eps < 1.0)) fail("SchemeConfig: eps must lie in (0, 1)");
  if (n_max < 1) fail("SchemeConfig: n_max must be at least 1");
  if (!(delta >= 0.0) || !std::isfinite(delta)) fail("SchemeConfig: delta must be nonnegative");
}

Vector is1_step(const SpectralFactors& f, const Vector& u, int n, const SchemeConfig& cfg,
                const Vector& f_noisy) {
  require_length(f, u, "is1_step");
  if (n < 0) throw Error(ErrorKind::InvalidParameter, "is1_step: n must be nonnegative");
  return cfg.q * u + (1.0 - cfg.q) * reg_solve_T(f, cfg.schedule(n + 1), f_noisy);
}

Vector closed_form_iterate(const SpectralFactors& f, int n, const SchemeConfig& cfg,
                           const Vector& data) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "closed_form_iterate: n must be >= 1");
  require_length(f, data, "closed_form_iterate");
  const Vector beta = f.data_coefficients(data);
  Vector sum = Vector::Zero(data.size());
  for (int j = 0; j < n; ++j) {
    sum += closed_form_weight(n, j, cfg.q) * spectral::reg_solve_T(f, cfg.schedule(j + 1), beta);
  }
  return sum;
}

double g_stat_step(const SpectralFactors& f, double g_prev, int n, const SchemeConfig& cfg,
                   const Vector& f_noisy) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "g_stat_step: n must be >= 1");
  if (!(g_prev >= 0.0)) throw Error(ErrorKind::InvalidParameter, "g_stat_step: G_prev < 0");
  return cfg.q * g_prev + (1.0 - cfg.q) * discrepancy_norm(f, cfg.schedule(n), f_noisy);
}

SolveReport is1_solve(const SpectralFactors& f, const Vector& f_noisy, const SchemeConfig& cfg) {
  require_noisy_data(f, f_noisy, cfg, "is1_solve");
  const Vector beta = f.data_coefficients(f_noisy);
  const double threshold = cfg.threshold();

  SchemeConfig run = cfg;
  int doublings = 0;
  while ((1.0 - run.q) * spectral::discrepancy_norm(f, run.schedule(1), beta) <= threshold) {
    if (doublings == kMaxAlphaDoublings) {
      throw Error(ErrorKind::AssumptionFailure,
                  "is1_solve: G_1 stays below C delta^eps after 60 doublings of alpha0");
    }
    run.alpha0 *= 2.0;
    ++doublings;
  }

  SolveReport report;
  report.alpha0_used = run.alpha0;
  report.trace.reserve(static_cast<std::size_t>(std::min(run.n_max, 256)));
  Vector u = Vector::Zero(f_noisy.size());
  double g = 0.0;
  for (int n = 1; n <= run.n_max; ++n) {
    const double a = run.schedule(n);
    Vector next = run.q * u + (1.0 - run.q) * spectral::reg_solve_T(f, a, beta);
    g = run.q * g + (1.0 - run.q) * spectral::discrepancy_norm(f, a, beta);
    report.trace.push_back({n, a, g, (next - u).norm()});
    u = std::move(next);
    if (run.capture_iterates) report.iterates.push_back(u);
    if (g <= threshold) {
      report.stop_index = n;
      report.stop_reason =
          doublings > 0 ? StopReason::AssumptionAdjustedThenMet : StopReason::DiscrepancyMet;
      report.solution = std::move(u);
      return report;
    }
  }
  report.stop_index = run.n_max;
  report.stop_reason = StopReason::CapReached;
  report.solution = std::move(u);
  return report;
}

Vector is2_step(const SpectralFactors& f, const Vector& u, int n, const SchemeConfig& cfg,
                const Vector& f_noisy) {
  require_length(f, u, "is2_step");
  require_length(f, f_noisy, "is2_step");
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "is2_step: n must be >= 1");
  const double a = cfg.schedule(n);
  return is2_update(f, u, a, f.data_coefficients(f_noisy));
}

SolveReport is2_solve(const SpectralFactors& f, const Vector& f_noisy, const SchemeConfig& cfg) {
  require_noisy_data(f, f_noisy, cfg, "is2_solve");
  const Vector beta = f.data_coefficients(f_noisy);
  const double threshold = cfg.threshold();

  SolveReport report;
  report.alpha0_used = cfg.alpha0;
  Vector u = Vector::Zero(f_noisy.size());
  for (int n = 1; n <= cfg.n_max; ++n) {
    const double a = cfg.schedule(n);
    const double w = spectral::discrepancy_norm(f, a, beta);
    Vector next = is2_update(f, u, a, beta);
    report.trace.push_back({n, a, w, (next - u).norm()});
    u = std::move(next);
    if (cfg.capture_iterates) report.iterates.push_back(u);
    if (w <= threshold) {
      report.stop_index = n;
      report.stop_reason = StopReason::DiscrepancyMet;
      report.solution = std::move(u);
      return report;
    }
  }
  report.stop_index = cfg.n_max;
  report.stop_reason = StopReason::CapReached;
  report.solution = std::move(u);
  return report;
}

SolveReport is1_run(const SpectralFactors& f, const Vector& data, const SchemeConfig& cfg,
                    int steps) {
  SchemeConfig run = cfg;
  run.delta = 0.0;
  run.validate();
  require_length(f, data, "is1_run");
  if (steps < 1) throw Error(ErrorKind::InvalidParameter, "is1_run: steps must be >= 1");
  const Vector beta = f.data_coefficients(data);

  SolveReport report;
  report.alpha0_used = run.alpha0;
  Vector u = Vector::Zero(data.size());
  double g = 0.0;
  for (int n = 1; n <= steps; ++n) {
    const double a = run.schedule(n);
    Vector next = run.q * u + (1.0 - run.q) * spectral::reg_solve_T(f, a, beta);
    g = run.q * g + (1.0 - run.q) * spectral::discrepancy_norm(f, a, beta);
    report.trace.push_back({n, a, g, (next - u).norm()});
    u = std::move(next);
    if (run.capture_iterates) report.iterates.push_back(u);
  }
  report.stop_index = steps;
  report.stop_reason = StopReason::FixedCount;
  report.solution = std::move(u);
  return report;
}

SolveReport is2_run(const SpectralFactors& f, const Vector& data, const SchemeConfig& cfg,
                    int steps) {
  SchemeConfig run = cfg;
  run.delta = 0.0;
  run.validate();
  require_length(f, data, "is2_run");
  if (steps < 1) throw Error(ErrorKind::InvalidParameter, "is2_run: steps must be >= 1");
  const Vector beta = f.data_coefficients(data);

  SolveReport report;
  report.alpha0_used = run.alpha0;
  Vector u = Vector::Zero(data.size());
  for (int n = 1; n <= steps; ++n) {
    const double a = run.schedule(n);
    Vector next = is2_update(f, u, a, beta);
    report.trace.push_back({n, a, spectral::discrepancy_norm(f, a, beta), (next - u).norm()});
    u = std::move(next);
    if (run.capture_iterates) report.iterates.push_back(u);
  }
  report.stop_index = steps;
  report.stop_reason = StopReason::FixedCount;
  report.solution = std::move(u);
  return report;
}

}  // namespace dsm
