#pragma once

// Gaussian information plumbing over explicit covariance matrices: mutual
// information between index sets via log-determinants, and linear-MMSE
// conditional variance (pseudo-inverse based, so duplicated or linearly
// dependent observations are harmless).

#include <Eigen/Dense>
#include <span>

namespace mdr {

// I(A; B | C) in bits for a zero-mean Gaussian vector with the given
// covariance:  0.5 log2( det K_{AC} det K_{BC} / (det K_C det K_{ABC}) ).
// The index sets must be pairwise disjoint; det of the empty set is 1.
// Throws std::runtime_error when a required principal block is not positive
// definite, std::domain_error on bad indices.
double gaussian_mi_bits(const Eigen::MatrixXd& cov, std::span<const int> a,
                        std::span<const int> b, std::span<const int> c = {});

// Var(target | observations) under the same Gaussian model, computed with a
// rank-revealing pseudo-inverse of the observation block.  Throws
// std::runtime_error when the covariance is not positive semidefinite on the
// requested block.
double mmse_variance(const Eigen::MatrixXd& cov, int target, std::span<const int> observations);

struct MmseSolution {
  Eigen::VectorXd coeffs;  // one weight per observation
  double variance;         // residual Var(target | observations)
};

// The linear-MMSE estimator weights alongside the residual variance.
MmseSolution mmse_solution(const Eigen::MatrixXd& cov, int target,
                           std::span<const int> observations);

}  // namespace mdr
