#include "dsm/error.hpp"
#include "dsm/problems.hpp"
#include "dsm/vr_newton.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace dsm {
namespace {

SpectralFactors scalar_one() { return svd(DenseMatrix(Eigen::MatrixXd::Identity(1, 1))); }

TEST(Phi, ScalarRootAtOne) {
  const auto f = scalar_one();
  const Vector g = Vector::Ones(1);
  // C delta = 1.25 * 0.4 = 0.5
  EXPECT_NEAR(phi(f, 1.0, g, 1.25, 0.4), 0.0, 1e-15);
  EXPECT_NEAR(phi(f, 3.0, g, 1.25, 0.4), 0.5625 - 0.25, 1e-15);
}

TEST(Phi, LargeParameterLimit) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd a = testing::random_matrix(5, rng);
  const Vector g = testing::random_vector(5, rng);
  const double expected = g.squaredNorm() - std::pow(1.01 * 0.1, 2);
  EXPECT_NEAR(phi(svd(DenseMatrix(a)), 1e12, g, 1.01, 0.1), expected, 1e-6 * std::abs(expected));
}

TEST(Phi, NondecreasingOnGrid) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = testing::graded_matrix(6, 6.0, rng);
    const Vector g = testing::random_vector(6, rng);
    const auto f = svd(DenseMatrix(a));
    double prev = -INFINITY;
    for (double e = -8.0; e <= 2.0; e += 0.25) {
      const double v = phi(f, std::pow(10.0, e), g, 1.01, 0.01);
      EXPECT_GE(v, prev - 1e-14);
      prev = v;
    }
  }
}

TEST(Phi, RejectsNonPositiveParameter) {
  const auto f = scalar_one();
  try {
    phi(f, 0.0, Vector::Ones(1), 1.01, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParameter);
  }
  EXPECT_THROW(phi_prime(f, -1.0, Vector::Ones(1)), Error);
}

TEST(PhiPrime, ScalarAnalytic) {
  const auto f = scalar_one();
  EXPECT_NEAR(phi_prime(f, 1.0, Vector::Ones(1)), 0.25, 1e-15);
  for (double a : {0.1, 2.0, 7.0}) {
    EXPECT_NEAR(phi_prime(f, a, Vector::Ones(1)), 2 * a / std::pow(1 + a, 3), 1e-15);
  }
}

TEST(PhiPrime, ZeroData) {
  std::mt19937_64 rng(3);
  const auto f = svd(DenseMatrix(testing::random_matrix(4, rng)));
  for (double a : {1e-6, 1.0, 1e3}) EXPECT_EQ(phi_prime(f, a, Vector::Zero(4)), 0.0);
}

TEST(PhiPrime, MatchesCentralDifferences) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(trial) % 8;
    const Eigen::MatrixXd a = testing::random_matrix(m, rng);
    const Vector g = testing::random_vector(m, rng);
    const auto f = svd(DenseMatrix(a));
    for (double reg : {1e-3, 0.1, 1.0, 10.0}) {
      const double h = 1e-6 * reg;
      const double fd = (phi(f, reg + h, g, 1.01, 0.1) - phi(f, reg - h, g, 1.01, 0.1)) / (2 * h);
      const double d = phi_prime(f, reg, g);
      EXPECT_GE(d, 0.0);
      EXPECT_LE(std::abs(d - fd), 1e-5 * std::max(1.0, std::abs(d))) << "trial " << trial;
    }
  }
}

TEST(VrSolve, ScalarFromFour) {
  VrConfig cfg;
  cfg.alpha0 = 4.0;
  cfg.C = 1.25;
  cfg.delta = 0.4;
  const auto report = vr_solve(scalar_one(), Vector::Ones(1), cfg);
  EXPECT_TRUE(report.converged);
  // From a = 4 the undamped step is 4 - 0.39/0.064 < 0, so that level aborts
  // and the restart from a = 2 converges.
  EXPECT_EQ(report.k_delta, 1);
  EXPECT_LE(report.newton_iters, 10);
  EXPECT_NEAR(report.a_final, 1.0, 1e-2);
  EXPECT_LE(std::abs(phi(scalar_one(), report.a_final, Vector::Ones(1), 1.25, 0.4)), 1e-3 * 0.25);
  EXPECT_NEAR(report.solution(0), 1.0 / (1.0 + report.a_final), 1e-15);
}

TEST(VrSolve, NoRootWhenDataBelowNoise) {
  VrConfig cfg;
  cfg.delta = 1.0;
  try {
    vr_solve(scalar_one(), Vector::Ones(1), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoRoot);
  }
}

TEST(VrSolve, RejectsBadConfig) {
  VrConfig cfg;
  cfg.delta = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.delta = 0.1;
  cfg.C = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(VrSolve, ToleranceInvariantOnRandomInstances) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd a = testing::graded_matrix(7, 6.0, rng);
    const Vector y = testing::random_vector(7, rng);
    const Vector g = a * y;
    const Vector e = testing::random_vector(7, rng);
    VrConfig cfg;
    cfg.delta = 1e-2 * g.norm();
    const Vector noisy = g + cfg.delta * e / e.norm();
    const auto f = svd(DenseMatrix(a));
    const auto report = vr_solve(f, noisy, cfg);
    ASSERT_TRUE(report.converged);
    const double target = std::pow(cfg.C * cfg.delta, 2);
    EXPECT_LE(std::abs(phi(f, report.a_final, noisy, cfg.C, cfg.delta)), cfg.newton_tol_factor * target);
  }
}

TEST(VrSolve, HilbertBand) {
  const auto p = hilbert_problem(200);
  VrConfig cfg;
  cfg.delta = 1e-2;
  const auto report = vr_solve(svd(p.A), add_noise(p.f_exact, {1e-2, 15}), cfg);
  EXPECT_TRUE(report.converged);
  EXPECT_GE(report.k_delta, 1);
  EXPECT_LE(report.k_delta, 3);
  const double err = (report.solution - p.y_exact).norm() / p.y_exact.norm();
  EXPECT_GT(err, 0.01);
  EXPECT_LT(err, 0.08);
}

}  // namespace
}  // namespace dsm
