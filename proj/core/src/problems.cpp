#include "dsm/problems.hpp"

#include "dsm/error.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

namespace dsm {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in the open interval (0, 1).
double open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

void require_dimension(std::size_t m, std::size_t minimum, const char* what) {
  if (m < minimum) {
    throw Error(ErrorKind::InvalidParameter,
                std::string(what) + ": m must be at least " + std::to_string(minimum));
  }
}

ProblemInstance finish_galerkin(std::string name, DenseMatrix a, Vector f, Vector y,
                                const GalerkinGrid& grid) {
  if (!f.allFinite() || !y.allFinite()) {
    throw Error(ErrorKind::NumericalFailure, name + ": non-finite quadrature result");
  }
  // Projection error of the box basis is O(h^2) in the data.
  const double h = grid.d2 / static_cast<double>(grid.m);
  const double tol = 10.0 * h * h * f.norm();
  return ProblemInstance{std::move(name), std::move(a), std::move(f), std::move(y), tol};
}

}  // namespace

double GalerkinGrid::phi_height() const { return std::sqrt(static_cast<double>(m) / c1); }
double GalerkinGrid::psi_height() const { return std::sqrt(static_cast<double>(m) / c2); }

void GalerkinGrid::validate() const {
  if (m < 2) throw Error(ErrorKind::InvalidParameter, "GalerkinGrid: m must be at least 2");
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "GalerkinGrid: c1, c2 must be positive");
  }
  if (!(d2 > 0.0) || !(d4 > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "GalerkinGrid: nodes must be strictly increasing");
  }
}

DenseMatrix galerkin_matrix(const GalerkinGrid& grid, const GalerkinKernel& kernel, int points) {
  grid.validate();
  const GaussRule rule = gauss_legendre(points);
  const std::size_t m = grid.m;
  const double scale = grid.phi_height() * grid.psi_height();
  const auto& offsets = kernel.kink_offsets;
  if (offsets.size() > 6) {
    throw Error(ErrorKind::InvalidParameter, "galerkin_matrix: at most 6 kink lines supported");
  }

  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::array<double, 6> inner_breaks{};
  std::array<double, 12> outer_breaks{};
  for (std::size_t i = 0; i < m; ++i) {
    const double s0 = grid.s_node(i);
    const double s1 = grid.s_node(i + 1);
    for (std::size_t c = 0; c < offsets.size(); ++c) {
      outer_breaks[2 * c] = s0 + offsets[c];
      outer_breaks[2 * c + 1] = s1 + offsets[c];
    }
    const std::span<const double> outer(outer_breaks.data(), 2 * offsets.size());
    for (std::size_t j = 0; j < m; ++j) {
      const double t0 = grid.t_node(j);
      const double t1 = grid.t_node(j + 1);
      auto inner = [&](double t) {
        for (std::size_t c = 0; c < offsets.size(); ++c) inner_breaks[c] = t - offsets[c];
        return integrate([&](double s) { return kernel.value(s, t); }, s0, s1, rule,
                         std::span<const double>(inner_breaks.data(), offsets.size()));
      };
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          scale * integrate(inner, t0, t1, rule, outer);
    }
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::NumericalFailure, "galerkin_matrix: non-finite quadrature result");
  }
  return DenseMatrix(std::move(a));
}

Vector project_onto_phi(const GalerkinGrid& grid, const std::function<double(double)>& g,
                        int points, std::span<const double> breakpoints) {
  grid.validate();
  const GaussRule rule = gauss_legendre(points);
  Vector out(static_cast<Eigen::Index>(grid.m));
  for (std::size_t i = 0; i < grid.m; ++i) {
    out(static_cast<Eigen::Index>(i)) =
        grid.phi_height() * integrate(g, grid.s_node(i), grid.s_node(i + 1), rule, breakpoints);
  }
  return out;
}

Vector project_onto_psi(const GalerkinGrid& grid, const std::function<double(double)>& u,
                        int points, std::span<const double> breakpoints) {
  grid.validate();
  const GaussRule rule = gauss_legendre(points);
  Vector out(static_cast<Eigen::Index>(grid.m));
  for (std::size_t j = 0; j < grid.m; ++j) {
    out(static_cast<Eigen::Index>(j)) =
        grid.psi_height() * integrate(u, grid.t_node(j), grid.t_node(j + 1), rule, breakpoints);
  }
  return out;
}

DenseMatrix hilbert(std::size_t m) {
  require_dimension(m, 1, "hilbert");
  const auto n = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // 1-based (i+1) + (j+1) + 1
      h(i, j) = 1.0 / static_cast<double>(i + j + 3);
    }
  }
  return DenseMatrix(std::move(h));
}

ProblemInstance hilbert_problem(std::size_t m) {
  DenseMatrix h = hilbert(m);
  Vector y(static_cast<Eigen::Index>(m));
  for (std::size_t k = 1; k <= m; ++k) {
    y(static_cast<Eigen::Index>(k - 1)) = std::sqrt(0.5 * static_cast<double>(k));
  }
  Vector f = h * y;
  const double tol = 1e-10 * f.norm();
  return ProblemInstance{"hilbert", std::move(h), std::move(f), std::move(y), tol};
}

double min_sigma_asymptotic(std::size_t m) {
  require_dimension(m, 1, "min_sigma_asymptotic");
  const double md = static_cast<double>(m);
  const double log_value = 3.75 * std::numbers::ln2 + 1.5 * std::log(kPi) + 0.5 * std::log(md) -
                           (4.0 * md + 4.0) * std::log(std::numbers::sqrt2 + 1.0);
  return std::exp(log_value);
}

double phillips_kernel(double z) {
  return std::abs(z) < 3.0 ? 1.0 + std::cos(kPi * z / 3.0) : 0.0;
}

double phillips_rhs(double s) {
  const double r = std::abs(s);
  if (r > 6.0) return 0.0;
  return (6.0 - r) * (1.0 + 0.5 * std::cos(kPi * s / 3.0)) +
         9.0 / (2.0 * kPi) * std::sin(kPi * r / 3.0);
}

GalerkinGrid fredholm_a_grid(std::size_t m) {
  return GalerkinGrid{.c1 = 12.0, .c2 = 12.0, .d1 = -6.0, .d2 = 12.0, .d3 = -6.0, .d4 = 12.0, .m = m};
}

ProblemInstance fredholm_a(std::size_t m) {
  require_dimension(m, 2, "fredholm_a");
  return fredholm_a(fredholm_a_grid(m), kDefaultQuadraturePoints);
}

ProblemInstance fredholm_a(const GalerkinGrid& grid, int points) {
  const GalerkinKernel kernel{[](double s, double t) { return phillips_kernel(t - s); },
                              {-3.0, 3.0}};
  constexpr std::array<double, 3> rhs_breaks{-6.0, 0.0, 6.0};
  constexpr std::array<double, 2> solution_breaks{-3.0, 3.0};
  DenseMatrix a = galerkin_matrix(grid, kernel, points);
  Vector f = project_onto_phi(grid, phillips_rhs, points, rhs_breaks);
  Vector y = project_onto_psi(grid, phillips_kernel, points, solution_breaks);
  return finish_galerkin("fredholm-a", std::move(a), std::move(f), std::move(y), grid);
}

double green_kernel(double s, double t) { return s < t ? s * (t - 1.0) : t * (s - 1.0); }

double green_rhs(double s) { return (s * s * s - s) / 6.0; }

GalerkinGrid fredholm_b_grid(std::size_t m) {
  return GalerkinGrid{.c1 = 1.0, .c2 = 1.0, .d1 = 0.0, .d2 = 1.0, .d3 = 0.0, .d4 = 1.0, .m = m};
}

ProblemInstance fredholm_b(std::size_t m) {
  require_dimension(m, 2, "fredholm_b");
  return fredholm_b(fredholm_b_grid(m), kDefaultQuadraturePoints);
}

ProblemInstance fredholm_b(const GalerkinGrid& grid, int points) {
  const GalerkinKernel kernel{green_kernel, {0.0}};
  DenseMatrix a = galerkin_matrix(grid, kernel, points);
  Vector f = project_onto_phi(grid, green_rhs, points);
  Vector y = project_onto_psi(grid, [](double t) { return t; }, points);
  return finish_galerkin("fredholm-b", std::move(a), std::move(f), std::move(y), grid);
}

Vector standard_normal(std::size_t n, std::uint64_t seed) {
  const std::uint64_t key = splitmix64(seed);
  Vector e(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t pair = i / 2;
    const double u1 = open_unit(splitmix64(key + 2 * pair));
    const double u2 = open_unit(splitmix64(key + 2 * pair + 1));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    e(static_cast<Eigen::Index>(i)) = (i % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
  }
  return e;
}

Vector add_noise(const Vector& f, const NoiseSpec& spec) {
  if (!(spec.delta > 0.0) || !std::isfinite(spec.delta)) {
    throw Error(ErrorKind::InvalidParameter, "add_noise: delta must be positive");
  }
  if (f.size() == 0) throw Error(ErrorKind::InvalidInput, "add_noise: empty data vector");
  require_finite(f, "add_noise");
  std::uint64_t seed = spec.seed;
  Vector e = standard_normal(static_cast<std::size_t>(f.size()), seed);
  while (e.norm() == 0.0) {
    e = standard_normal(static_cast<std::size_t>(f.size()), ++seed);
  }
  return f + spec.delta * (e / e.norm());
}

void write_problem(std::ostream& out, const ProblemInstance& problem) {
  const std::size_t m = problem.m();
  const auto old_precision = out.precision(17);
  out << m << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out << problem.A(i, j) << '\n';
  }
  for (Eigen::Index i = 0; i < problem.f_exact.size(); ++i) out << problem.f_exact(i) << '\n';
  for (Eigen::Index i = 0; i < problem.y_exact.size(); ++i) out << problem.y_exact(i) << '\n';
  out.precision(old_precision);
}

ProblemInstance read_problem(std::istream& in, std::string name) {
  std::size_t m = 0;
  if (!(in >> m) || m == 0) {
    throw Error(ErrorKind::InvalidInput, "read_problem: missing or zero dimension header");
  }
  auto read_values = [&](std::size_t count, const char* what) {
    std::vector<double> values(count);
    for (auto& v : values) {
      if (!(in >> v)) {
        throw Error(ErrorKind::InvalidInput, std::string("read_problem: truncated ") + what);
      }
    }
    return values;
  };
  const std::vector<double> entries = read_values(m * m, "matrix");
  const std::vector<double> f = read_values(m, "f");
  const std::vector<double> y = read_values(m, "y");
  DenseMatrix a(m, m, entries);
  Vector fv = Eigen::Map<const Vector>(f.data(), static_cast<Eigen::Index>(m));
  Vector yv = Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(m));
  require_finite(fv, "read_problem");
  require_finite(yv, "read_problem");
  const double tol = (a * yv - fv).norm();
  return ProblemInstance{std::move(name), std::move(a), std::move(fv), std::move(yv), tol};
}

}  // namespace dsm
