#include "mdr/ozarow.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace mdr {

namespace {

void check_unit_interval(double d, const char* what) {
  if (!(d > 0.0) || !(d <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in (0, 1], got " +
                            std::to_string(d));
  }
}

double noise_variance(double d, const char* what) {
  if (!(d < 1.0)) {
    throw std::domain_error(std::string(what) +
                            " must be below 1 (unit distortion needs no description)");
  }
  return d / (1.0 - d);
}

double half_log2_inv(double d) { return -0.5 * std::log2(d); }

// Deterministic bracketed scalar minimization: a fixed coarse scan to locate
// the best bracket, then golden-section refinement.  Returns the minimum value
// and writes the minimizer; resolves the objective well below obj_tol.
double minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       double obj_tol, double* argmin) {
  constexpr int kScan = 64;
  double best_x = lo, best_f = f(lo);
  const double fhi = f(hi);
  if (fhi < best_f) {
    best_f = fhi;
    best_x = hi;
  }
  int best_i = -1;
  for (int i = 1; i < kScan; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / kScan;
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
      best_i = i;
    }
  }
  double a = lo, b = hi;
  if (best_i >= 0) {
    a = lo + (hi - lo) * static_cast<double>(best_i - 1) / kScan;
    b = lo + (hi - lo) * static_cast<double>(best_i + 1) / kScan;
  } else if (best_x == lo) {
    b = lo + (hi - lo) / kScan;
  } else {
    a = hi - (hi - lo) / kScan;
  }
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > obj_tol * 1e-3; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  for (double x : {a, x1, x2, b}) {
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  }
  if (argmin) *argmin = best_x;
  return best_f;
}

}  // namespace

TwoDescDistortions::TwoDescDistortions(double d1_, double d2_, double d12_)
    : d1(d1_), d2(d2_), d12(d12_) {
  check_unit_interval(d1, "d1");
  check_unit_interval(d2, "d2");
  check_unit_interval(d12, "d12");
}

double d12_max_of(double d1, double d2) {
  check_unit_interval(d1, "d1");
  check_unit_interval(d2, "d2");
  return 1.0 / (1.0 / d1 + 1.0 / d2 - 1.0);
}

OzarowParams ozarow_params(const TwoDescDistortions& d) {
  OzarowParams p{};
  p.sigma1_sq = noise_variance(d.d1, "d1");
  p.sigma2_sq = noise_variance(d.d2, "d2");
  p.pi = (1.0 - d.d1) * (1.0 - d.d2);
  p.d12_max = d12_max_of(d.d1, d.d2);
  // Factored form of (1-d12)[(d1-d12)(d2-d12) + d12 d1 d2 - d12^2]: the
  // expanded sum cancels catastrophically as d12 approaches the ceiling and
  // can round to a spurious negative, while this product stays nonnegative
  // whenever d12 <= d12_max.
  p.gamma = (1.0 - d.d12) * (d.d1 + d.d2 - d.d1 * d.d2) * (p.d12_max - d.d12);
  if (d.d12 >= p.d12_max) {
    p.rho12_star = 0.0;
    p.delta_bits = 0.0;
    return p;
  }
  // Rationalized form of -(sqrt(pi d12^2 + gamma) - sqrt(pi d12^2)): stable
  // when gamma is small relative to pi d12^2.
  const double base = p.pi * d.d12 * d.d12;
  const double diff = p.gamma / (std::sqrt(base + p.gamma) + std::sqrt(base));
  p.rho12_star = -diff / ((1.0 - d.d12) * std::sqrt(d.d1 * d.d2));
  if (!(p.rho12_star > -1.0)) {
    throw std::domain_error("joint distortion target is infeasible for these side distortions");
  }
  p.delta_bits = -0.5 * std::log2((1.0 - p.rho12_star) * (1.0 + p.rho12_star));
  return p;
}

double achieved_d12(double d1, double d2, double rho) {
  check_unit_interval(d1, "d1");
  check_unit_interval(d2, "d2");
  if (!(std::abs(rho) < 1.0)) {
    throw std::domain_error("noise correlation must satisfy |rho| < 1");
  }
  const double s1 = noise_variance(d1, "d1");
  const double s2 = noise_variance(d2, "d2");
  const double c = rho * std::sqrt(s1 * s2);
  Eigen::Matrix2d cov;
  cov << 1.0 + s1, 1.0 + c, 1.0 + c, 1.0 + s2;
  const Eigen::Vector2d cross(1.0, 1.0);
  const Eigen::Vector2d coeff = cov.ldlt().solve(cross);
  return 1.0 - cross.dot(coeff);
}

double delta_excess_bits(double d1, double d2, double d12) {
  return ozarow_params(TwoDescDistortions(d1, d2, d12)).delta_bits;
}

NoExcessRegion no_excess_region(const TwoDescDistortions& d) {
  NoExcessRegion out{};
  out.applies = d.d12 <= d.d1 + d.d2 - 1.0;
  if (out.applies) {
    out.bounds = {half_log2_inv(d.d1), half_log2_inv(d.d2), half_log2_inv(d.d12)};
  } else {
    out.bounds = {0.0, 0.0, 0.0};
  }
  return out;
}

std::array<double, 2> corner_point_p0(double d1, double d12) {
  check_unit_interval(d1, "d1");
  check_unit_interval(d12, "d12");
  if (d12 > d1) {
    throw std::domain_error("corner point requires d12 <= d1");
  }
  return {half_log2_inv(d1), 0.5 * std::log2(d1 / d12)};
}

std::vector<Halfspace> two_region_halfspaces(const TwoDescDistortions& d) {
  const auto p = ozarow_params(d);
  std::vector<Halfspace> out;
  out.push_back({"R1", {1.0, 0.0}, half_log2_inv(d.d1)});
  out.push_back({"R2", {0.0, 1.0}, half_log2_inv(d.d2)});
  out.push_back({"R1+R2", {1.0, 1.0}, half_log2_inv(d.d1 * d.d2) + p.delta_bits});
  return out;
}

std::vector<MembershipRow> evaluate_membership(const std::vector<Halfspace>& halfspaces,
                                               const std::vector<double>& rates,
                                               double tol) {
  std::vector<MembershipRow> out;
  out.reserve(halfspaces.size());
  for (const auto& h : halfspaces) {
    if (h.coeffs.size() != rates.size()) {
      throw std::domain_error("rate tuple length does not match the constraint width");
    }
    double lhs = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) lhs += h.coeffs[i] * rates[i];
    MembershipRow row{h.name, lhs, h.bound_bits, lhs >= h.bound_bits - tol,
                      std::abs(lhs - h.bound_bits) <= tol};
    out.push_back(std::move(row));
  }
  return out;
}

IndependentSumRate independent_sum_rate(const TwoDescDistortions& d) {
  const double cap = d12_max_of(d.d1, d.d2);
  if (d.d12 >= cap) {
    return {half_log2_inv(d.d1 * d.d2), d.d1, d.d2, true};
  }
  // With the joint target binding, 1/d1 + 1/d2 = 1 + 1/d12.  In u = 1/d1 the
  // sum rate is 0.5 log2(u (c - u)), concave in u, so the minimum sits at an
  // endpoint of the box interval; the bracketed search lands there.
  const double c = 1.0 + 1.0 / d.d12;
  const double u_lo = 1.0 / d.d1;
  const double u_hi = c - 1.0 / d.d2;
  auto objective = [c](double u) { return 0.5 * std::log2(u * (c - u)); };
  double u_best = u_lo;
  const double bits = minimize_scalar(objective, u_lo, u_hi, 1e-10, &u_best);
  IndependentSumRate out{};
  out.bits = bits;
  out.d1_opt = 1.0 / u_best;
  out.d2_opt = 1.0 / (c - u_best);
  out.degenerate = false;
  return out;
}

}  // namespace mdr
