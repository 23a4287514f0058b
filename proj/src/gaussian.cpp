#include "mdr/gaussian.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace mdr {

namespace {

void check_indices(const Eigen::MatrixXd& cov, std::span<const int> idx) {
  for (int i : idx) {
    if (i < 0 || i >= cov.rows()) throw std::domain_error("covariance index out of range");
  }
}

Eigen::MatrixXd block(const Eigen::MatrixXd& cov, const std::vector<int>& idx) {
  Eigen::MatrixXd out(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          cov(idx[r], idx[c]);
    }
  }
  return out;
}

// log det of a positive-definite principal block via Cholesky, 0 for the
// empty set.
double logdet(const Eigen::MatrixXd& cov, const std::vector<int>& idx) {
  if (idx.empty()) return 0.0;
  const Eigen::MatrixXd k = block(cov, idx);
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("covariance block is not positive definite");
  }
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log(l(i, i));
  return 2.0 * acc;
}

}  // namespace

double gaussian_mi_bits(const Eigen::MatrixXd& cov, std::span<const int> a,
                        std::span<const int> b, std::span<const int> c) {
  if (cov.rows() != cov.cols()) throw std::domain_error("covariance must be square");
  check_indices(cov, a);
  check_indices(cov, b);
  check_indices(cov, c);
  std::set<int> seen;
  for (auto idx : {a, b, c}) {
    for (int i : idx) {
      if (!seen.insert(i).second) {
        throw std::domain_error("index sets of the mutual information must be disjoint");
      }
    }
  }
  std::vector<int> ac(a.begin(), a.end());
  ac.insert(ac.end(), c.begin(), c.end());
  std::vector<int> bc(b.begin(), b.end());
  bc.insert(bc.end(), c.begin(), c.end());
  std::vector<int> abc(a.begin(), a.end());
  abc.insert(abc.end(), b.begin(), b.end());
  abc.insert(abc.end(), c.begin(), c.end());
  const std::vector<int> cc(c.begin(), c.end());
  const double nats = 0.5 * (logdet(cov, ac) + logdet(cov, bc) - logdet(cov, cc) -
                             logdet(cov, abc));
  return nats / std::log(2.0);
}

MmseSolution mmse_solution(const Eigen::MatrixXd& cov, int target,
                           std::span<const int> observations) {
  if (cov.rows() != cov.cols()) throw std::domain_error("covariance must be square");
  const int idx[] = {target};
  check_indices(cov, idx);
  check_indices(cov, observations);
  if (observations.empty()) return {Eigen::VectorXd(0), cov(target, target)};

  const std::vector<int> obs(observations.begin(), observations.end());
  const Eigen::MatrixXd koo = block(cov, obs);
  // Reject covariances with a genuinely negative direction; duplicated
  // observations only make the block singular, which the pseudo-inverse
  // handles.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(koo);
  if (es.info() != Eigen::Success ||
      es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff())) {
    throw std::runtime_error("observation covariance is not positive semidefinite");
  }
  Eigen::VectorXd kox(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    kox(static_cast<Eigen::Index>(i)) = cov(obs[i], target);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(koo);
  MmseSolution out;
  out.coeffs = cod.solve(kox);
  out.variance = cov(target, target) - kox.dot(out.coeffs);
  return out;
}

double mmse_variance(const Eigen::MatrixXd& cov, int target,
                     std::span<const int> observations) {
  return mmse_solution(cov, target, observations).variance;
}

}  // namespace mdr
