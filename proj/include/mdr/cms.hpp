#pragma once

// Discrete combinatorial-message-sharing evaluator: the entropy functional
// alpha over upward-closed families, the full auxiliary-rate constraint
// system, description-rate assembly, expected distortion, rate feasibility,
// and the two-channel replica bounds.
//
// Convention throughout: a codeword variable referenced by a formula but
// absent from the pmf is a constant and contributes zero entropy (it is
// dropped from entropy arguments and conditioning sets alike).

#include <optional>
#include <vector>

#include "mdr/pmf.hpp"
#include "mdr/subsets.hpp"

namespace mdr {

// Nonnegative rates for every auxiliary codeword: refinement rates R'_l on
// singletons and shared rates R''_S on subsets with |S| >= 2.
class AuxRateVector {
 public:
  explicit AuxRateVector(int channel_count);

  int channel_count() const { return channel_count_; }
  double base(int channel) const;                // R'_l
  void set_base(int channel, double bits);
  double shared(const SubsetId& s) const;        // R''_S, |S| >= 2
  void set_shared(const SubsetId& s, double bits);
  // All entries, indexed by subset mask (index 0 unused).
  const std::vector<double>& by_mask() const { return by_mask_; }

 private:
  int channel_count_;
  std::vector<double> by_mask_;
};

// alpha(Q): the converse entropy functional of the layered scheme, in bits.
// Zero for the empty family; domain error when q is not upward closed or is
// declared over a different channel count than the pmf.
double alpha_bits(const JointPmf& pmf, const SubsetFamily& q);

struct CmsConstraint {
  SubsetFamily q;
  std::vector<SubsetId> shared_support;  // non-singleton members of q
  std::vector<int> base_support;         // channels of singleton members
  double bound_bits;                     // alpha(pmf, q)
};

// One closed constraint  sum_{S in shared_support} R''_S +
// sum_{l in base_support} R'_l  >=  bound_bits  per upward-closed family.
std::vector<CmsConstraint> cms_constraints(const JointPmf& pmf);

// Per-channel description rates: R_l = R'_l + sum over shared sets containing
// channel l of R''_S.  Domain error on any negative auxiliary rate.
std::vector<double> description_rates(const AuxRateVector& aux);

struct ReconstructionMap {
  SubsetId decoder;                             // layer codeword U_decoder
  std::vector<int> map;                         // codeword symbol -> reconstruction symbol
  std::vector<std::vector<double>> distortion;  // [source symbol][reconstruction symbol]
};

// E[d(X, psi(U_decoder))] under the joint pmf.
double expected_distortion(const JointPmf& pmf, const ReconstructionMap& recon);

struct FeasibilityResult {
  bool feasible;
  std::optional<AuxRateVector> witness;  // satisfies every constraint within tolerance
};

inline constexpr double kRateFeasibilityTol = 1e-9;
inline constexpr int kMaxFeasibilityChannels = 4;

// Does the description-rate tuple lie in the achievable region for this pmf?
// Decided by eliminating the refinement rates (R'_l = R_l - sum_{S ∋ l} R''_S
// >= 0) and running a deterministic phase-1 simplex over the shared rates.
FeasibilityResult rate_feasible(const std::vector<double>& rates, const JointPmf& pmf);

struct ZbReplicaBounds {
  double r1_bits;
  double r2_bits;
  double sum_bits;
};

// Two-channel replica bounds: with G the shared codeword and F1, F2, F12 the
// layer codewords,
//   R1 >= I(X; F1, G),  R2 >= I(X; F2, G),
//   R1 + R2 >= 2 I(X; G) + H(F1|G) + H(F2|G) - H(F1,F2,F12 | X,G)
//              + H(F12 | F1,F2,G).
// Requires channel_count == 2 and all four codeword roles declared (use
// alphabet size 1 for a constant codeword); domain error otherwise.
ZbReplicaBounds zb_replica_bounds(const JointPmf& pmf);

}  // namespace mdr
