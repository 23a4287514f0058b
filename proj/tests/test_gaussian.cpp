#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "mdr/gaussian.hpp"

using namespace mdr;

namespace {

// Unit-variance source observed through additive noise of variance
// d / (1 - d), so that Var(X | X + W) = d.
Eigen::MatrixXd source_plus_noise(double d) {
  const double nv = d / (1.0 - d);
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 1.0, 1.0, 1.0 + nv;
  return cov;
}

Eigen::MatrixXd random_pd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
  return m * m.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST_CASE("gaussian_mi_bits: rate of a quadratic test channel") {
  // I(X; X + W) = 0.5 log2(1/D) when Var(X|X+W) = D.
  const std::vector<int> a = {0}, b = {1};
  CHECK(gaussian_mi_bits(source_plus_noise(0.25), a, b) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gaussian_mi_bits(source_plus_noise(0.5), a, b) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // Symmetric in its first two arguments.
  CHECK(gaussian_mi_bits(source_plus_noise(0.25), b, a) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gaussian_mi_bits: independence gives zero") {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4);
  cov(0, 1) = cov(1, 0) = 0.7;  // correlate only within {0,1}
  const std::vector<int> a = {0, 1}, b = {2, 3};
  CHECK(gaussian_mi_bits(cov, a, b) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gaussian_mi_bits: chain rule on random covariances") {
  // I(A; B, C | D) = I(A; B | D) + I(A; C | B, D).
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd cov = random_pd(rng, 6);
    const std::vector<int> a = {0}, b = {1, 2}, c = {3}, d = {4, 5};
    const std::vector<int> bc = {1, 2, 3}, bd = {1, 2, 4, 5};
    const double joint = gaussian_mi_bits(cov, a, bc, d);
    const double split = gaussian_mi_bits(cov, a, b, d) +
                         gaussian_mi_bits(cov, a, c, bd);
    CHECK(joint == doctest::Approx(split).epsilon(1e-10));
  }
}

TEST_CASE("gaussian_mi_bits: input validation") {
  const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(3, 3);
  const std::vector<int> a = {0}, overlap = {0, 1}, b = {1}, oob = {5};
  CHECK_THROWS_AS(gaussian_mi_bits(cov, a, overlap), std::domain_error);
  CHECK_THROWS_AS(gaussian_mi_bits(cov, a, b, overlap), std::domain_error);
  CHECK_THROWS_AS(gaussian_mi_bits(cov, a, oob), std::domain_error);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(gaussian_mi_bits(indefinite, a, b), std::runtime_error);
}

TEST_CASE("mmse_variance: scalar observation") {
  const std::vector<int> obs = {1};
  CHECK(mmse_variance(source_plus_noise(0.25), 0, obs) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mmse_variance(source_plus_noise(0.8), 0, obs) ==
        doctest::Approx(0.8).epsilon(1e-12));
  // No observations: the prior variance.
  CHECK(mmse_variance(source_plus_noise(0.25), 0, {}) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mmse_variance: duplicated observations collapse") {
  // (X, U, U) with U = X + W; conditioning on the copy must change nothing.
  const Eigen::MatrixXd two = source_plus_noise(0.25);
  Eigen::MatrixXd three(3, 3);
  three << two(0, 0), two(0, 1), two(0, 1),
           two(1, 0), two(1, 1), two(1, 1),
           two(1, 0), two(1, 1), two(1, 1);
  const std::vector<int> one_obs = {1}, both_obs = {1, 2};
  CHECK(mmse_variance(three, 0, both_obs) ==
        doctest::Approx(mmse_variance(three, 0, one_obs)).epsilon(1e-12));
}

TEST_CASE("mmse_solution: weights reproduce the residual variance") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd cov = random_pd(rng, 4);
    const std::vector<int> obs = {1, 2, 3};
    const auto sol = mmse_solution(cov, 0, obs);
    REQUIRE(sol.coeffs.size() == 3);
    // Var(X - w^T Y) expanded from the covariance blocks.
    double direct = cov(0, 0);
    for (int i = 0; i < 3; ++i) {
      direct -= 2.0 * sol.coeffs(i) * cov(0, obs[i]);
      for (int j = 0; j < 3; ++j)
        direct += sol.coeffs(i) * sol.coeffs(j) * cov(obs[i], obs[j]);
    }
    CHECK(sol.variance == doctest::Approx(direct).epsilon(1e-10));
    CHECK(sol.variance == doctest::Approx(mmse_variance(cov, 0, obs))
                              .epsilon(1e-12));
    // Orthogonality: the residual is uncorrelated with every observation.
    for (int k = 0; k < 3; ++k) {
      double resid_cov = cov(0, obs[k]);
      for (int i = 0; i < 3; ++i)
        resid_cov -= sol.coeffs(i) * cov(obs[i], obs[k]);
      CHECK(resid_cov == doctest::Approx(0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("mmse_variance: rejects an indefinite observation block") {
  Eigen::MatrixXd cov(3, 3);
  cov << 1.0, 0.1, 0.1,
         0.1, 1.0, 2.0,
         0.1, 2.0, 1.0;  // observations {1,2} have eigenvalues 3 and -1
  const std::vector<int> obs = {1, 2};
  CHECK_THROWS_AS(mmse_variance(cov, 0, obs), std::runtime_error);
}
