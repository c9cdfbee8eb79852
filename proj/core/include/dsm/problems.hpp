#pragma once

// Benchmark problem generators and the deterministic noise model.

#include "dsm/linalg.hpp"
#include "dsm/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace dsm {

struct ProblemInstance {
  std::string name;
  DenseMatrix A;
  Vector f_exact;
  Vector y_exact;
  /// Bound on ||A y_exact - f_exact|| declared by the generator. Machine
  /// precision for Hilbert, quadrature/projection limited for Fredholm.
  double consistency_tol = 0.0;

  std::size_t m() const noexcept { return A.rows(); }
};

struct NoiseSpec {
  double delta = 0.0;  // absolute l2 noise level
  std::uint64_t seed = 15;
};

/// Box-function Galerkin grid: phi_i = sqrt(m/c1) on [s_{i-1}, s_i] and
/// psi_j = sqrt(m/c2) on [t_{j-1}, t_j], with s_i = d1 + i d2/m and
/// t_i = d3 + i d4/m.
struct GalerkinGrid {
  double c1 = 1.0, c2 = 1.0;
  double d1 = 0.0, d2 = 1.0, d3 = 0.0, d4 = 1.0;
  std::size_t m = 2;

  double s_node(std::size_t i) const { return d1 + static_cast<double>(i) * d2 / static_cast<double>(m); }
  double t_node(std::size_t i) const { return d3 + static_cast<double>(i) * d4 / static_cast<double>(m); }
  double phi_height() const;
  double psi_height() const;

  void validate() const;
};

/// Kernel k(s, t) whose only loss of smoothness lies on the lines t - s = c
/// for c in kink_offsets.
struct GalerkinKernel {
  std::function<double(double s, double t)> value;
  std::vector<double> kink_offsets;
};

/// A_ij = int int k(s, t) phi_i(s) psi_j(t) ds dt by iterated Gauss-Legendre
/// with splits at the kernel's kink lines.
DenseMatrix galerkin_matrix(const GalerkinGrid& grid, const GalerkinKernel& kernel, int points);

/// (int g phi_i)_i over the s-grid.
Vector project_onto_phi(const GalerkinGrid& grid, const std::function<double(double)>& g,
                        int points, std::span<const double> breakpoints = {});

/// (int u psi_j)_j over the t-grid.
Vector project_onto_psi(const GalerkinGrid& grid, const std::function<double(double)>& u,
                        int points, std::span<const double> breakpoints = {});

/// H_ij = 1 / (i + j + 1) for 1-based i, j; the first entry is 1/3.
DenseMatrix hilbert(std::size_t m);

/// hilbert(m) with y_k = sqrt(k / 2) and f = H y.
ProblemInstance hilbert_problem(std::size_t m);

/// Leading term 2^{15/4} pi^{3/2} sqrt(m) (sqrt 2 + 1)^{-(4m+4)} of the
/// smallest eigenvalue. Underflows to zero for large m.
double min_sigma_asymptotic(std::size_t m);

// Problem a): f(s) = int k(t - s) u(t) dt with k(z) = 1 + cos(pi z / 3) on
// |z| < 3, solution u = k.
double phillips_kernel(double z);
double phillips_rhs(double s);
GalerkinGrid fredholm_a_grid(std::size_t m);
ProblemInstance fredholm_a(std::size_t m);
ProblemInstance fredholm_a(const GalerkinGrid& grid, int points);

// Problem b): f(s) = int_0^1 k(s, t) u(t) dt, k = s(t-1) for s < t and
// t(s-1) otherwise, f(s) = (s^3 - s)/6, solution u(x) = x.
double green_kernel(double s, double t);
double green_rhs(double s);
GalerkinGrid fredholm_b_grid(std::size_t m);
ProblemInstance fredholm_b(std::size_t m);
ProblemInstance fredholm_b(const GalerkinGrid& grid, int points);

inline constexpr int kDefaultQuadraturePoints = 4;

/// n standard normal deviates from a counter-based generator: deviate i only
/// depends on (seed, i). SplitMix64 hashing with the Box-Muller transform.
Vector standard_normal(std::size_t n, std::uint64_t seed);

/// f + delta e / ||e|| with e = standard_normal(len, seed); ||result - f|| = delta.
Vector add_noise(const Vector& f, const NoiseSpec& spec);

/// Text export: "m", then m*m row-major entries of A, then f, then y, one value
/// per line with 17 significant digits.
void write_problem(std::ostream& out, const ProblemInstance& problem);
ProblemInstance read_problem(std::istream& in, std::string name = "imported");

}  // namespace dsm
