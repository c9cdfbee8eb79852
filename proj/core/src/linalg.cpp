#include "dsm/linalg.hpp"

#include "dsm/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dsm {

namespace {

void require_size(const SpectralFactors& f, const Vector& g, const char* what) {
  if (static_cast<std::size_t>(g.size()) != f.size()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": vector length " +
                                             std::to_string(g.size()) + " does not match m = " +
                                             std::to_string(f.size()));
  }
}

}  // namespace

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite entry");
  }
}

void require_positive_parameter(double a, const char* what) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::InvalidParameter,
                std::string(what) + ": regularization parameter must be positive, got " +
                    std::to_string(a));
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::span<const double> row_major) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::InvalidInput, "DenseMatrix: dimensions must be positive");
  }
  if (row_major.size() != rows * cols) {
    throw Error(ErrorKind::InvalidInput, "DenseMatrix: expected " + std::to_string(rows * cols) +
                                             " entries, got " + std::to_string(row_major.size()));
  }
  values_.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row_major[i * cols + j];
    }
  }
  if (!values_.allFinite()) {
    throw Error(ErrorKind::InvalidInput, "DenseMatrix: non-finite entry");
  }
}

DenseMatrix::DenseMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw Error(ErrorKind::InvalidInput, "DenseMatrix: dimensions must be positive");
  }
  if (!values_.allFinite()) {
    throw Error(ErrorKind::InvalidInput, "DenseMatrix: non-finite entry");
  }
}

Vector DenseMatrix::operator*(const Vector& x) const {
  if (x.size() != values_.cols()) {
    throw Error(ErrorKind::InvalidInput, "DenseMatrix: product dimension mismatch");
  }
  return values_ * x;
}

SpectralFactors::SpectralFactors(Eigen::MatrixXd left, Vector sigma, Eigen::MatrixXd right)
    : left_(std::move(left)), sigma_(std::move(sigma)), right_(std::move(right)) {}

Vector SpectralFactors::data_coefficients(const Vector& g) const {
  require_size(*this, g, "data_coefficients");
  return left_.transpose() * g;
}

Eigen::MatrixXd SpectralFactors::reconstruct() const {
  return left_ * sigma_.asDiagonal() * right_.transpose();
}

SpectralFactors svd(const DenseMatrix& a) {
  if (!a.square()) {
    throw Error(ErrorKind::InvalidInput, "svd: matrix must be square, got " +
                                             std::to_string(a.rows()) + "x" +
                                             std::to_string(a.cols()));
  }
  if (!a.values().allFinite()) {
    throw Error(ErrorKind::InvalidInput, "svd: non-finite entry");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> dec(a.values(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (dec.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "svd: decomposition did not converge");
  }
  Vector sigma = dec.singularValues();
  if (!sigma.allFinite() || !dec.matrixU().allFinite() || !dec.matrixV().allFinite()) {
    throw Error(ErrorKind::NumericalFailure, "svd: non-finite factors");
  }
  // Eigen returns them sorted already; clamp the sign of exact-zero noise.
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    sigma(i) = std::max(sigma(i), 0.0);
  }
  return SpectralFactors(dec.matrixU(), std::move(sigma), dec.matrixV());
}

namespace spectral {

Vector reg_solve_T(const SpectralFactors& f, double a, const Vector& beta) {
  const Vector& s = f.singular_values();
  Vector filtered = (s.array() * beta.array() / (s.array().square() + a)).matrix();
  return f.right_vectors() * filtered;
}

double discrepancy_norm(const SpectralFactors& f, double a, const Vector& beta) {
  const Vector& s = f.singular_values();
  return a * (beta.array() / (s.array().square() + a)).matrix().norm();
}

}  // namespace spectral

Vector reg_solve_T(const SpectralFactors& f, double a, const Vector& g) {
  require_positive_parameter(a, "reg_solve_T");
  return spectral::reg_solve_T(f, a, f.data_coefficients(g));
}

Vector reg_apply_Tinv(const SpectralFactors& f, double a, const Vector& u) {
  require_positive_parameter(a, "reg_apply_Tinv");
  require_size(f, u, "reg_apply_Tinv");
  const Vector& s = f.singular_values();
  Vector c = f.right_vectors().transpose() * u;
  c.array() /= s.array().square() + a;
  return f.right_vectors() * c;
}

Vector reg_apply_Qinv(const SpectralFactors& f, double a, const Vector& g) {
  require_positive_parameter(a, "reg_apply_Qinv");
  const Vector& s = f.singular_values();
  Vector c = f.data_coefficients(g);
  c.array() /= s.array().square() + a;
  return f.left_vectors() * c;
}

double discrepancy_norm(const SpectralFactors& f, double a, const Vector& g) {
  require_positive_parameter(a, "discrepancy_norm");
  return spectral::discrepancy_norm(f, a, f.data_coefficients(g));
}

double condition_number(const SpectralFactors& f) noexcept {
  const Vector& s = f.singular_values();
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

}  // namespace dsm
