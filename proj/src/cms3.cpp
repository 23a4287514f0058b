#include "mdr/cms3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mdr/gaussian.hpp"

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

double pos(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

ThreeDescDistortions::ThreeDescDistortions(double d1_, double d2_, double d3_, double d12_,
                                           double d23_)
    : d1(d1_), d2(d2_), d3(d3_), d12(d12_), d23(d23_) {
  check_unit_interval(d1, "d1");
  check_unit_interval(d2, "d2");
  check_unit_interval(d3, "d3");
  check_unit_interval(d12, "d12");
  check_unit_interval(d23, "d23");
  if (d1 > d3) {
    throw std::domain_error("canonical orientation requires d1 <= d3 "
                            "(swap descriptions 1 and 3)");
  }
  if (d12 > std::min(d1, d2)) {
    throw std::domain_error("d12 must not exceed min(d1, d2)");
  }
  if (d23 > std::min(d2, d3)) {
    throw std::domain_error("d23 must not exceed min(d2, d3)");
  }
}

double d23_star(double d1, double d2, double d3, double d12) {
  check_unit_interval(d1, "d1");
  check_unit_interval(d2, "d2");
  check_unit_interval(d3, "d3");
  check_unit_interval(d12, "d12");
  if (d1 > d3) {
    throw std::domain_error("d23_star requires the role order d1 <= d3");
  }
  if (d12 > std::min(d1, d2)) {
    throw std::domain_error("d12 must not exceed min(d1, d2)");
  }
  const double s1 = noise_variance(d1, "d1");
  const double s2 = noise_variance(d2, "d2");
  const double s3 = noise_variance(d3, "d3");
  const double rho12 = ozarow_params(TwoDescDistortions(d1, d2, d12)).rho12_star;
  const double rho = rho12 * std::sqrt(s1 / s3);
  const double num = s2 * s3 * (1.0 - rho * rho);
  return num / (num + s2 + s3 - 2.0 * std::sqrt(s2 * s3) * rho);
}

double d23_max_of(double d2, double d3) { return d12_max_of(d2, d3); }

std::vector<CornerPoint> corner_points(const ThreeDescDistortions& d) {
  const double a1 = half_log2_inv(d.d1);
  const double a2 = half_log2_inv(d.d2);
  const double a3 = half_log2_inv(d.d3);
  const double e12 = delta_excess_bits(d.d1, d.d2, d.d12);
  const double e23 = delta_excess_bits(d.d2, d.d3, d.d23);
  // Each corner minimizes the coordinates greedily in the order its label
  // names, against the five halfspaces.
  std::vector<CornerPoint> out;
  out.push_back({"P123", {a1, a2 + e12, a3 + pos(e23 - e12)}});
  out.push_back({"P132", {a1, a2 + std::max(e12, e23), a3}});
  out.push_back({"P213", {a1 + e12, a2, a3 + e23}});
  out.push_back({"P231", {a1 + e12, a2, a3 + e23}});
  out.push_back({"P312", {a1, a2 + std::max(e12, e23), a3}});
  out.push_back({"P321", {a1 + pos(e12 - e23), a2 + e23, a3}});
  return out;
}

ThreeRegion three_region(const ThreeDescDistortions& d) {
  const double a1 = half_log2_inv(d.d1);
  const double a2 = half_log2_inv(d.d2);
  const double a3 = half_log2_inv(d.d3);
  ThreeRegion region{d, delta_excess_bits(d.d1, d.d2, d.d12),
                     delta_excess_bits(d.d2, d.d3, d.d23), {}, {}};
  region.halfspaces.push_back({"R1", {1.0, 0.0, 0.0}, a1});
  region.halfspaces.push_back({"R2", {0.0, 1.0, 0.0}, a2});
  region.halfspaces.push_back({"R3", {0.0, 0.0, 1.0}, a3});
  region.halfspaces.push_back({"R1+R2", {1.0, 1.0, 0.0}, a1 + a2 + region.delta12_bits});
  region.halfspaces.push_back({"R2+R3", {0.0, 1.0, 1.0}, a2 + a3 + region.delta23_bits});
  region.corners = corner_points(d);
  return region;
}

AuxAssignment3 aux_assignment(const CornerPoint& corner, const ThreeDescDistortions&) {
  AuxAssignment3 aux{};
  aux.r13_shared = corner.rates[2];
  aux.r2_refine = corner.rates[1];
  double refine = corner.rates[0] - corner.rates[2];
  if (refine < 0.0) {
    if (refine < -1e-12) {
      throw std::domain_error("corner " + corner.label +
                              " is not representable with nonnegative auxiliary rates");
    }
    refine = 0.0;
  }
  aux.r1_refine = refine;
  return aux;
}

AuxBounds3 aux_bounds(const ThreeDescDistortions& d) {
  const double star = d23_star(d.d1, d.d2, d.d3, d.d12);
  AuxBounds3 b{};
  b.r13_min = half_log2_inv(d.d3);
  b.r2_min = half_log2_inv(d.d2);
  b.desc1_min = half_log2_inv(d.d1);
  b.pair23_min = half_log2_inv(d.d2 * d.d3) + delta_excess_bits(d.d2, d.d3, star);
  b.total_min = half_log2_inv(d.d1 * d.d2) + delta_excess_bits(d.d1, d.d2, d.d12);
  return b;
}

double TestChannelSpec3::pair23_rho() const {
  const double tot = sigma1t_sq + sigma3t_sq;
  if (tot <= 0.0) return 0.0;
  return rho12 * std::sqrt(sigma1t_sq / tot);
}

TestChannelSpec3 test_channels(double d1, double d2, double d3, double d12) {
  check_unit_interval(d1, "d1");
  check_unit_interval(d2, "d2");
  check_unit_interval(d3, "d3");
  check_unit_interval(d12, "d12");
  if (d1 > d3) {
    throw std::domain_error("test channels require the role order d1 <= d3");
  }
  if (d12 > std::min(d1, d2)) {
    throw std::domain_error("d12 must not exceed min(d1, d2)");
  }
  TestChannelSpec3 spec{};
  spec.sigma1t_sq = noise_variance(d1, "d1");
  spec.sigma2t_sq = noise_variance(d2, "d2");
  spec.sigma3t_sq = noise_variance(d3, "d3") - spec.sigma1t_sq;  // >= 0 since d1 <= d3
  spec.rho12 = ozarow_params(TwoDescDistortions(d1, d2, d12)).rho12_star;
  return spec;
}

TestChannelSpec3 test_channels(const ThreeDescDistortions& d) {
  return test_channels(d.d1, d.d2, d.d3, d.d12);
}

Eigen::MatrixXd channel_covariance(const TestChannelSpec3& spec) {
  if (!(spec.sigma1t_sq > 0.0) || !(spec.sigma2t_sq > 0.0) || !(spec.sigma3t_sq >= 0.0)) {
    throw std::domain_error("noise variances must be positive (W3 may be degenerate)");
  }
  if (!(std::abs(spec.rho12) < 1.0)) {
    throw std::domain_error("noise correlation must satisfy |rho12| < 1");
  }
  // Base covariance of (X, W1, W2, W3), then push through the linear map onto
  // (X, U1, U2, V13, W1, W2, W3, W1+W3).
  Eigen::Matrix4d base = Eigen::Matrix4d::Zero();
  base(0, 0) = 1.0;
  base(1, 1) = spec.sigma1t_sq;
  base(2, 2) = spec.sigma2t_sq;
  base(3, 3) = spec.sigma3t_sq;
  base(1, 2) = base(2, 1) = spec.rho12 * std::sqrt(spec.sigma1t_sq * spec.sigma2t_sq);

  Eigen::Matrix<double, cov3::kDim, 4> m = Eigen::Matrix<double, cov3::kDim, 4>::Zero();
  m(cov3::kX, 0) = 1.0;
  m(cov3::kU1, 0) = 1.0;
  m(cov3::kU1, 1) = 1.0;
  m(cov3::kU2, 0) = 1.0;
  m(cov3::kU2, 2) = 1.0;
  m(cov3::kV13, 0) = 1.0;
  m(cov3::kV13, 1) = 1.0;
  m(cov3::kV13, 3) = 1.0;
  m(cov3::kW1, 1) = 1.0;
  m(cov3::kW2, 2) = 1.0;
  m(cov3::kW3, 3) = 1.0;
  m(cov3::kW13, 1) = 1.0;
  m(cov3::kW13, 3) = 1.0;
  return m * base * m.transpose();
}

AchievedDistortions3 achieved_distortions(const TestChannelSpec3& spec) {
  const Eigen::MatrixXd cov = channel_covariance(spec);
  using namespace cov3;
  const int obs1[] = {kU1};
  const int obs2[] = {kU2};
  const int obs3[] = {kV13};
  const int obs12[] = {kU1, kU2};
  const int obs23[] = {kU2, kV13};
  AchievedDistortions3 out{};
  out.d1 = mmse_variance(cov, kX, obs1);
  out.d2 = mmse_variance(cov, kX, obs2);
  out.d3 = mmse_variance(cov, kX, obs3);
  out.d12 = mmse_variance(cov, kX, obs12);
  out.d23 = mmse_variance(cov, kX, obs23);
  return out;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::complete_region: return "CompleteRegion";
    case Regime::min_sum_rate: return "MinSumRate";
    case Regime::independent_optimal: return "IndependentOptimal";
    case Regime::unclassified: return "Unclassified";
    case Regime::infeasible: return "Infeasible";
  }
  return "?";
}

RegimeLabel classify_regime(double d1, double d2, double d3, double d12, double d23) {
  check_unit_interval(d1, "d1");
  check_unit_interval(d2, "d2");
  check_unit_interval(d3, "d3");
  check_unit_interval(d12, "d12");
  check_unit_interval(d23, "d23");
  if (d12 > std::min(d1, d2)) throw std::domain_error("d12 must not exceed min(d1, d2)");
  if (d23 > std::min(d2, d3)) throw std::domain_error("d23 must not exceed min(d2, d3)");

  const bool swapped = d3 < d1;
  const double c1 = swapped ? d3 : d1;
  const double c3 = swapped ? d1 : d3;
  const double c12 = swapped ? d23 : d12;
  const double c23 = swapped ? d12 : d23;

  const double star = d23_star(c1, d2, c3, c12);
  const double excess12 = delta_excess_bits(c1, d2, c12);
  const double excess23 = delta_excess_bits(d2, c3, c23);
  const double cap12 = d12_max_of(c1, d2);
  const double cap23 = d12_max_of(d2, c3);

  RegimeLabel out{};
  out.roles_swapped = swapped;
  out.d23_star_value = star;
  out.delta12_bits = swapped ? excess23 : excess12;  // user's (1,2) pair
  out.delta23_bits = swapped ? excess12 : excess23;  // user's (2,3) pair
  out.d12_max = swapped ? cap23 : cap12;
  out.d23_max = swapped ? cap12 : cap23;
  out.min_sum_rate_bits = half_log2_inv(c1 * d2 * c3) + std::max(excess12, excess23);
  out.independent_optimal = (c12 >= cap12) && (c23 >= cap23);
  out.complete = std::abs(c23 - star) <= kCompleteRegionTol;
  out.min_sum_achieving = (c23 >= star) || (excess23 >= excess12);

  if (out.independent_optimal) {
    out.label = Regime::independent_optimal;
  } else if (out.complete) {
    out.label = Regime::complete_region;
  } else if (out.min_sum_achieving) {
    out.label = Regime::min_sum_rate;
  } else {
    out.label = Regime::unclassified;
  }
  return out;
}

RegimeMap regime_map(double d1, double d2, double d3, int d12_steps, int d23_steps) {
  check_unit_interval(d1, "d1");
  check_unit_interval(d2, "d2");
  check_unit_interval(d3, "d3");
  constexpr int kMaxSteps = 2000;
  for (int steps : {d12_steps, d23_steps}) {
    if (steps < 2 || steps > kMaxSteps) {
      throw std::domain_error("grid steps must lie in [2, " + std::to_string(kMaxSteps) + "]");
    }
  }
  RegimeMap map{d1, d2, d3, d12_steps, d23_steps, {}};
  map.cells.reserve(static_cast<std::size_t>(d12_steps) * static_cast<std::size_t>(d23_steps));
  const double hi12 = std::min(d1, d2);
  const double hi23 = std::min(d2, d3);
  const double step12 = hi12 / d12_steps;
  const double step23 = hi23 / d23_steps;
  for (int i = 1; i <= d12_steps; ++i) {
    const double g12 = hi12 * static_cast<double>(i) / d12_steps;
    for (int j = 1; j <= d23_steps; ++j) {
      const double g23 = hi23 * static_cast<double>(j) / d23_steps;
      RegimeCell cell{g12, g23, {}, false};
      try {
        cell.label = classify_regime(d1, d2, d3, g12, g23);
        // Distance to the completeness locus along the axis that carries it.
        const double axis_value = cell.label.roles_swapped ? g12 : g23;
        const double axis_step = cell.label.roles_swapped ? step12 : step23;
        cell.near_complete =
            std::abs(axis_value - cell.label.d23_star_value) <= axis_step;
      } catch (const std::exception&) {
        cell.label = RegimeLabel{};
        cell.label.label = Regime::infeasible;
      }
      map.cells.push_back(cell);
    }
  }
  return map;
}

}  // namespace mdr
