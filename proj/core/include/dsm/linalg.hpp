#pragma once

// Dense linear algebra backend. A is factored once; every regularized solve
// afterwards is a spectral apply costing O(m^2).

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace dsm {

using Vector = Eigen::VectorXd;

/// Dense real matrix with finite entries.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  /// Builds from row-major entries; throws InvalidInput when the count does
  /// not match or an entry is not finite.
  DenseMatrix(std::size_t rows, std::size_t cols, std::span<const double> row_major);

  explicit DenseMatrix(Eigen::MatrixXd values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  bool square() const noexcept { return values_.rows() == values_.cols(); }

  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  const Eigen::MatrixXd& values() const noexcept { return values_; }

  Vector operator*(const Vector& x) const;

 private:
  Eigen::MatrixXd values_;
};

/// A = U diag(sigma) V^T with sigma sorted nonincreasing.
class SpectralFactors {
 public:
  SpectralFactors(Eigen::MatrixXd left, Vector sigma, Eigen::MatrixXd right);

  std::size_t size() const noexcept { return static_cast<std::size_t>(sigma_.size()); }
  const Eigen::MatrixXd& left_vectors() const noexcept { return left_; }
  const Vector& singular_values() const noexcept { return sigma_; }
  const Eigen::MatrixXd& right_vectors() const noexcept { return right_; }

  /// Coefficients U^T g of g in the left singular basis.
  Vector data_coefficients(const Vector& g) const;

  Eigen::MatrixXd reconstruct() const;

 private:
  Eigen::MatrixXd left_;
  Vector sigma_;
  Eigen::MatrixXd right_;
};

/// Full SVD of a square matrix. Throws InvalidInput for non-square input and
/// NumericalFailure when the decomposition does not converge.
SpectralFactors svd(const DenseMatrix& a);

/// (A^T A + aI)^{-1} A^T g.
Vector reg_solve_T(const SpectralFactors& f, double a, const Vector& g);

/// (A^T A + aI)^{-1} u.
Vector reg_apply_Tinv(const SpectralFactors& f, double a, const Vector& u);

/// (A A^T + aI)^{-1} g.
Vector reg_apply_Qinv(const SpectralFactors& f, double a, const Vector& g);

/// a ||(A A^T + aI)^{-1} g||, which equals ||A reg_solve_T(a, g) - g||.
double discrepancy_norm(const SpectralFactors& f, double a, const Vector& g);

/// sigma_1 / sigma_m, +infinity when sigma_m is exactly zero.
double condition_number(const SpectralFactors& f) noexcept;

// Variants taking precomputed coefficients beta = U^T g. The solvers call these
// once per iteration so that U^T g is formed only once per solve.
namespace spectral {

Vector reg_solve_T(const SpectralFactors& f, double a, const Vector& beta);
double discrepancy_norm(const SpectralFactors& f, double a, const Vector& beta);

}  // namespace spectral

/// Throws InvalidInput unless every entry is finite.
void require_finite(const Vector& v, const char* what);

/// Throws InvalidParameter unless a > 0 and finite.
void require_positive_parameter(double a, const char* what);

}  // namespace dsm
