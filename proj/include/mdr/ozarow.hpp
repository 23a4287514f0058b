#pragma once

// Two-description quadratic-Gaussian machinery for a unit-variance source:
// the optimal noise correlation of the correlated-quantization construction,
// its excess sum rate delta, the induced joint distortion of two additive
// observations, the high-distortion (no-excess) region, and the sum rate
// forced by independent codebooks.
//
// All rates are in bits; distortions are normalized MSE in (0, 1].

#include <array>
#include <string>
#include <vector>

namespace mdr {

struct TwoDescDistortions {
  double d1;
  double d2;
  double d12;
  // Validates 0 < d1, d2, d12 <= 1.
  TwoDescDistortions(double d1_, double d2_, double d12_);
};

struct OzarowParams {
  double sigma1_sq;   // d1 / (1 - d1)
  double sigma2_sq;   // d2 / (1 - d2)
  double pi;          // (1 - d1)(1 - d2)
  double gamma;       // (1-d12)[(d1-d12)(d2-d12) + d12 d1 d2 - d12^2]
  double d12_max;     // 1 / (1/d1 + 1/d2 - 1): joint distortion of independent codebooks
  double rho12_star;  // optimal noise correlation, 0 when d12 >= d12_max
  double delta_bits;  // excess sum rate 0.5 log2(1 / (1 - rho12_star^2))
};

// Closed-form parameters of the two-description construction.  Domain error
// when d1 = 1 or d2 = 1 (infinite quantization-noise variance).
OzarowParams ozarow_params(const TwoDescDistortions& d);

// 1 / (1/d1 + 1/d2 - 1), the joint distortion reachable with independent
// quantization noises.
double d12_max_of(double d1, double d2);

// Var(X | X + W1, X + W2) for unit-variance X and noises with variances
// d_i / (1 - d_i) and correlation rho, by linear-MMSE algebra on the 3x3
// covariance.  Serves as the inversion oracle for rho12_star.  Domain error
// when |rho| >= 1 or a distortion leaves (0, 1).
double achieved_d12(double d1, double d2, double rho);

// Convenience: delta_bits of ozarow_params.
double delta_excess_bits(double d1, double d2, double d12);

struct NoExcessRegion {
  bool applies;                  // d12 <= d1 + d2 - 1
  std::array<double, 3> bounds;  // R1, R2, R1+R2 lower bounds when applies
};

// High-distortion regime: when d12 <= d1 + d2 - 1 the rate region is cut out
// by R1 >= 0.5 log2(1/d1), R2 >= 0.5 log2(1/d2), R1+R2 >= 0.5 log2(1/d12)
// with no excess term.
NoExcessRegion no_excess_region(const TwoDescDistortions& d);

// The extreme point (0.5 log2(1/d1), 0.5 log2(d1/d12)) of the no-excess sum
// bound where description 1 carries a full rate share.  Requires
// 0 < d12 <= d1 <= 1.
std::array<double, 2> corner_point_p0(double d1, double d12);

// A linear constraint sum_i coeffs[i] * R_i >= bound_bits.
struct Halfspace {
  std::string name;
  std::vector<double> coeffs;
  double bound_bits;
};

struct MembershipRow {
  std::string name;
  double lhs_bits;
  double bound_bits;
  bool satisfied;  // lhs >= bound - tol
  bool binding;    // |lhs - bound| <= tol
};

inline constexpr double kMembershipTol = 1e-9;

// Evaluate a rate tuple against each halfspace.  Domain error when the tuple
// length differs from the constraint width.
std::vector<MembershipRow> evaluate_membership(const std::vector<Halfspace>& halfspaces,
                                               const std::vector<double>& rates,
                                               double tol = kMembershipTol);

// The two-description region: R1, R2 single bounds plus the sum bound with
// excess delta.  Domain error when d1 = 1 or d2 = 1.
std::vector<Halfspace> two_region_halfspaces(const TwoDescDistortions& d);

struct IndependentSumRate {
  double bits;      // minimal sum rate with independent codebooks
  double d1_opt;    // side distortions achieving it
  double d2_opt;
  bool degenerate;  // d12 >= d12_max: independent codebooks are free, gap is 0
};

// Minimal 0.5 log2(1/(d1 d2)) over side distortions d1 <= D1, d2 <= D2 whose
// independent-noise joint distortion meets d12.  With the joint target binding
// this reduces to a one-dimensional bracketed minimization; the objective is
// resolved to 1e-10.
IndependentSumRate independent_sum_rate(const TwoDescDistortions& d);

}  // namespace mdr
