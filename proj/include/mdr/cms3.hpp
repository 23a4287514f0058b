#pragma once

// Asymmetric three-description quadratic-Gaussian cross-section for a
// unit-variance source, where description 3 is a degraded copy of the
// codeword shared between descriptions 1 and 3.  Covers: the induced joint
// distortion of the (2,3) pair, the rate region with its two pair bounds,
// the six sum-rate-optimal corner points with auxiliary-rate witnesses, the
// additive test-channel construction, and regime classification over the
// (d12, d23) plane.
//
// Canonical orientation is d1 <= d3 (description 1 is the finer of the pair
// that shares a codeword).  The classification surface accepts either
// orientation and swaps roles internally.

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "mdr/ozarow.hpp"

namespace mdr {

struct ThreeDescDistortions {
  double d1;
  double d2;
  double d3;
  double d12;
  double d23;
  // Validates 0 < d_i <= 1, d12 <= min(d1, d2), d23 <= min(d2, d3) and the
  // canonical orientation d1 <= d3.
  ThreeDescDistortions(double d1_, double d2_, double d3_, double d12_, double d23_);
};

// Joint distortion of the (2,3) pair induced by reusing the correlated pair
// construction of descriptions (1,2) and degrading description 1 into 3:
// the (2,3) noise correlation is rho12_star(d1,d2,d12) * sigma1 / sigma3.
// Domain errors: d1 > d3 (role order), d12 > min(d1,d2), any d outside (0,1).
double d23_star(double d1, double d2, double d3, double d12);

// Joint distortion of the (2,3) pair with independent noises (zero
// correlation); alias of the independent-codebook joint distortion.
double d23_max_of(double d2, double d3);

struct CornerPoint {
  std::string label;             // "P123" .. "P321": coordinate minimization order
  std::array<double, 3> rates;   // bits
};

struct ThreeRegion {
  ThreeDescDistortions distortions;
  double delta12_bits;              // excess of the (1,2) pair at d12
  double delta23_bits;              // excess of the (2,3) pair at d23
  std::vector<Halfspace> halfspaces;  // R1, R2, R3, R1+R2, R2+R3
  std::vector<CornerPoint> corners;   // the six minimization orders
};

// The rate region cut out by the three single bounds and the two pair bounds.
ThreeRegion three_region(const ThreeDescDistortions& d);

// The six corner points alone (P213 = P231 and P132 = P312 coincide).
std::vector<CornerPoint> corner_points(const ThreeDescDistortions& d);

// Auxiliary split of a corner: description 3 carries only the shared codeword
// (rate r13_shared), description 1 refines it (rate r1_refine on top of
// r13_shared), description 2 stands alone (r2_refine).
struct AuxAssignment3 {
  double r13_shared;   // = R3
  double r1_refine;    // = R1 - R3
  double r2_refine;    // = R2
};

// Split a corner into nonnegative auxiliary rates reproducing it exactly
// under (R1, R2, R3) = (r1_refine + r13_shared, r2_refine, r13_shared).
// Domain error when the corner needs a negative refinement rate, which cannot
// happen at d23 = d23_star with d1 <= d3.
AuxAssignment3 aux_assignment(const CornerPoint& corner, const ThreeDescDistortions& d);

// Lower bounds the auxiliary rates of any achievable split must satisfy; the
// pair bound on (2,3) is taken at the induced distortion d23_star.
struct AuxBounds3 {
  double r13_min;            // r13_shared           >= 0.5 log2(1/d3)
  double r2_min;             // r2_refine            >= 0.5 log2(1/d2)
  double desc1_min;          // r1_refine + r13      >= 0.5 log2(1/d1)
  double pair23_min;         // r2_refine + r13      >= 0.5 log2(1/(d2 d3)) + delta23*
  double total_min;          // r1_refine + r2 + r13 >= 0.5 log2(1/(d1 d2)) + delta12
};

AuxBounds3 aux_bounds(const ThreeDescDistortions& d);

// Additive test channels: U1 = X + W1, U2 = X + W2, V13 = X + W1 + W3 with
// var(W1) = sigma1t_sq, var(W2) = sigma2t_sq, var(W3) = sigma3t_sq,
// corr(W1, W2) = rho12, W3 independent of the rest.
struct TestChannelSpec3 {
  double sigma1t_sq;
  double sigma2t_sq;
  double sigma3t_sq;
  double rho12;
  // Correlation between the effective noises of the (2,3) pair:
  // rho12 * sqrt(sigma1t_sq / (sigma1t_sq + sigma3t_sq)).
  double pair23_rho() const;
};

// The channel realizing (d1, d2, d3, d12, d23_star); requires d1 <= d3 < 1.
TestChannelSpec3 test_channels(double d1, double d2, double d3, double d12);
TestChannelSpec3 test_channels(const ThreeDescDistortions& d);

// Index map of channel_covariance rows/columns.
namespace cov3 {
inline constexpr int kX = 0;
inline constexpr int kU1 = 1;
inline constexpr int kU2 = 2;
inline constexpr int kV13 = 3;
inline constexpr int kW1 = 4;
inline constexpr int kW2 = 5;
inline constexpr int kW3 = 6;
inline constexpr int kW13 = 7;  // W1 + W3
inline constexpr int kDim = 8;
}  // namespace cov3

// Covariance of (X, U1, U2, V13, W1, W2, W3, W1+W3) for unit-variance X.
Eigen::MatrixXd channel_covariance(const TestChannelSpec3& spec);

struct AchievedDistortions3 {
  double d1;
  double d2;
  double d3;
  double d12;
  double d23;
};

// The five decoder distortions of the additive construction, each computed by
// linear-MMSE algebra on the joint covariance.
AchievedDistortions3 achieved_distortions(const TestChannelSpec3& spec);

enum class Regime {
  complete_region,      // d23 matches d23_star: the cross-section is complete
  min_sum_rate,         // the minimal sum rate is achieved, region may be loose
  independent_optimal,  // both pair targets reachable with independent codebooks
  unclassified,
  infeasible,           // cell rejected by domain validation
};

const char* regime_name(Regime r);

struct RegimeLabel {
  Regime label;
  double d23_star_value;      // the starred joint distortion (see roles_swapped)
  double delta12_bits;        // excess of the user's (1,2) pair at d12
  double delta23_bits;        // excess of the user's (2,3) pair at d23
  double min_sum_rate_bits;   // 0.5 log2(1/(d1 d2 d3)) + max of the two excesses
  double d12_max;             // independent-codebook joint distortion, (1,2) pair
  double d23_max;             // independent-codebook joint distortion, (2,3) pair
  bool complete;              // |d23 - d23_star| <= 1e-9 (canonical orientation)
  bool min_sum_achieving;     // d23 >= d23_star or delta23 >= delta12 (canonical)
  bool independent_optimal;   // d12 >= d12_max and d23 >= d23_max
  bool roles_swapped;         // inputs had d3 < d1; the starred value applies to
                              // the user's (1,2) pair in that case
};

inline constexpr double kCompleteRegionTol = 1e-9;

// Classification with label precedence IndependentOptimal > CompleteRegion >
// MinSumRate > Unclassified (an independent-optimal point also satisfies the
// other two predicates, and the strongest property wins).
RegimeLabel classify_regime(double d1, double d2, double d3, double d12, double d23);

struct RegimeCell {
  double d12;
  double d23;
  RegimeLabel label;
  bool near_complete;  // |d23 - d23_star| within one grid step
};

struct RegimeMap {
  double d1;
  double d2;
  double d3;
  int d12_steps;
  int d23_steps;
  std::vector<RegimeCell> cells;  // d12 outer, d23 inner
};

// Classify the grid d12 = min(d1,d2) * i / d12_steps (i = 1..d12_steps) by
// d23 = min(d2,d3) * j / d23_steps (j = 1..d23_steps).  Cells that fail
// domain validation are labeled infeasible rather than aborting the sweep.
RegimeMap regime_map(double d1, double d2, double d3, int d12_steps, int d23_steps);

}  // namespace mdr
