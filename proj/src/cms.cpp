#include "mdr/cms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mdr/lp.hpp"

namespace mdr {

namespace {

void check_channel(int channel, int channel_count) {
  if (channel < 1 || channel > channel_count) {
    throw std::domain_error("channel " + std::to_string(channel) + " outside {1.." +
                            std::to_string(channel_count) + "}");
  }
}

// Nonempty submasks of t in canonical subset order.
std::vector<std::uint32_t> canonical_submasks(std::uint32_t t, int channel_count) {
  std::vector<std::uint32_t> out;
  if (t == 0) return out;
  for (const auto& s : nonempty_subsets(channel_count)) {
    if ((s.mask() & ~t) == 0) out.push_back(s.mask());
  }
  return out;
}

}  // namespace

AuxRateVector::AuxRateVector(int channel_count)
    : channel_count_(channel_count),
      by_mask_(std::size_t{1} << channel_count, 0.0) {
  if (channel_count < kMinChannels || channel_count > kMaxChannels) {
    throw std::domain_error("channel count out of range");
  }
}

double AuxRateVector::base(int channel) const {
  check_channel(channel, channel_count_);
  return by_mask_[std::size_t{1} << (channel - 1)];
}

void AuxRateVector::set_base(int channel, double bits) {
  check_channel(channel, channel_count_);
  by_mask_[std::size_t{1} << (channel - 1)] = bits;
}

double AuxRateVector::shared(const SubsetId& s) const {
  if (s.cardinality() < 2) throw std::domain_error("shared rate requires cardinality >= 2");
  return by_mask_[s.mask()];
}

void AuxRateVector::set_shared(const SubsetId& s, double bits) {
  if (s.cardinality() < 2) throw std::domain_error("shared rate requires cardinality >= 2");
  by_mask_[s.mask()] = bits;
}

double alpha_bits(const JointPmf& pmf, const SubsetFamily& q) {
  if (q.empty()) return 0.0;
  if (q.channel_count() != pmf.channel_count()) {
    throw std::domain_error("family and pmf declared over different channel counts");
  }
  if (!is_valid_q(q)) {
    throw std::domain_error("family is not upward closed under strict supersets");
  }
  const int n = pmf.channel_count();

  // Shared-codeword terms: H(V_K | shared codewords of all strict supersets).
  double total = 0.0;
  for (const auto& k : q) {
    if (k.cardinality() < 2) continue;
    const int target = pmf.find(RoleKind::shared, k);
    if (target < 0) continue;  // constant codeword, zero entropy
    std::vector<int> cond;
    for (const auto& sup : strict_supersets(k)) {
      const int idx = pmf.find(RoleKind::shared, sup);
      if (idx >= 0) cond.push_back(idx);
    }
    const int tgt[] = {target};
    total += conditional_entropy_bits(pmf, tgt, cond);
  }

  // Layer terms over the singleton channels: for each nonempty K within them,
  // H(U_K | shared codewords of supersets of K, layer codewords of proper
  // nonempty subsets of K).
  std::uint32_t t_mask = 0;
  for (int l : singletons_of(q)) t_mask |= (1u << (l - 1));
  for (std::uint32_t kmask : canonical_submasks(t_mask, n)) {
    const SubsetId k = SubsetId::from_mask(kmask, n);
    const int target = pmf.find(RoleKind::layer, k);
    if (target < 0) continue;
    std::vector<int> cond;
    for (std::uint32_t smask = 1; smask < (1u << n); ++smask) {
      if ((kmask & ~smask) == 0 && std::popcount(smask) >= 2) {
        const int idx = pmf.find(RoleKind::shared, SubsetId::from_mask(smask, n));
        if (idx >= 0) cond.push_back(idx);
      }
    }
    for (std::uint32_t jmask = (kmask - 1) & kmask; jmask != 0; jmask = (jmask - 1) & kmask) {
      const int idx = pmf.find(RoleKind::layer, SubsetId::from_mask(jmask, n));
      if (idx >= 0) cond.push_back(idx);
    }
    const int tgt[] = {target};
    total += conditional_entropy_bits(pmf, tgt, cond);
  }

  // Joint correction: minus H(all referenced codewords | X).
  std::vector<int> all_vars;
  for (const auto& k : q) {
    if (k.cardinality() < 2) {
      continue;
    }
    const int idx = pmf.find(RoleKind::shared, k);
    if (idx >= 0) all_vars.push_back(idx);
  }
  for (std::uint32_t kmask : canonical_submasks(t_mask, n)) {
    const int idx = pmf.find(RoleKind::layer, SubsetId::from_mask(kmask, n));
    if (idx >= 0) all_vars.push_back(idx);
  }
  const int src[] = {pmf.source_index()};
  total -= conditional_entropy_bits(pmf, all_vars, src);
  return total;
}

std::vector<CmsConstraint> cms_constraints(const JointPmf& pmf) {
  std::vector<CmsConstraint> out;
  for (auto& q : enumerate_q_star(pmf.channel_count())) {
    CmsConstraint c{std::move(q), {}, {}, 0.0};
    for (const auto& s : c.q) {
      if (s.cardinality() >= 2) c.shared_support.push_back(s);
    }
    c.base_support = singletons_of(c.q);
    c.bound_bits = alpha_bits(pmf, c.q);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<double> description_rates(const AuxRateVector& aux) {
  const int n = aux.channel_count();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (aux.by_mask()[mask] < 0.0) {
      throw std::domain_error("auxiliary rate for subset " +
                              SubsetId::from_mask(mask, n).label() + " is negative");
    }
  }
  std::vector<double> rates(static_cast<std::size_t>(n), 0.0);
  for (int l = 1; l <= n; ++l) {
    double r = aux.base(l);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) >= 2 && (mask >> (l - 1)) & 1u) {
        r += aux.by_mask()[mask];
      }
    }
    rates[static_cast<std::size_t>(l - 1)] = r;
  }
  return rates;
}

double expected_distortion(const JointPmf& pmf, const ReconstructionMap& recon) {
  const int u_idx = pmf.find(RoleKind::layer, recon.decoder);
  if (u_idx < 0) {
    throw std::domain_error("pmf declares no layer codeword for decoder " +
                            recon.decoder.label());
  }
  const int x_idx = pmf.source_index();
  const auto& alphabet = pmf.alphabet_sizes();
  const std::size_t u_size = static_cast<std::size_t>(alphabet[static_cast<std::size_t>(u_idx)]);
  const std::size_t x_size = static_cast<std::size_t>(alphabet[static_cast<std::size_t>(x_idx)]);
  if (recon.map.size() != u_size) {
    throw std::domain_error("reconstruction map must cover the codeword alphabet");
  }
  if (recon.distortion.size() != x_size) {
    throw std::domain_error("distortion table must have one row per source symbol");
  }
  const std::size_t recon_size = recon.distortion.empty() ? 0 : recon.distortion.front().size();
  if (recon_size == 0) throw std::domain_error("distortion table must be nonempty");
  for (const auto& row : recon.distortion) {
    if (row.size() != recon_size) throw std::domain_error("ragged distortion table");
  }
  for (int v : recon.map) {
    if (v < 0 || static_cast<std::size_t>(v) >= recon_size) {
      throw std::domain_error("reconstruction symbol out of range");
    }
  }

  // Strides recomputed locally from the declared alphabets (row-major).
  std::vector<std::size_t> strides(alphabet.size(), 1);
  for (int i = static_cast<int>(alphabet.size()) - 2; i >= 0; --i) {
    strides[static_cast<std::size_t>(i)] =
        strides[static_cast<std::size_t>(i + 1)] *
        static_cast<std::size_t>(alphabet[static_cast<std::size_t>(i + 1)]);
  }
  double acc = 0.0;
  const auto& p = pmf.probs();
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    if (p[idx] == 0.0) continue;
    const std::size_t x = (idx / strides[static_cast<std::size_t>(x_idx)]) % x_size;
    const std::size_t u = (idx / strides[static_cast<std::size_t>(u_idx)]) % u_size;
    acc += p[idx] * recon.distortion[x][static_cast<std::size_t>(recon.map[u])];
  }
  return acc;
}

FeasibilityResult rate_feasible(const std::vector<double>& rates, const JointPmf& pmf) {
  const int n = pmf.channel_count();
  if (n > kMaxFeasibilityChannels) {
    throw std::domain_error("rate feasibility supports at most " +
                            std::to_string(kMaxFeasibilityChannels) + " channels");
  }
  if (rates.size() != static_cast<std::size_t>(n)) {
    throw std::domain_error("rate tuple length must equal the channel count");
  }
  for (double r : rates) {
    if (!(r >= 0.0)) throw std::domain_error("description rates must be nonnegative");
  }

  // Variables: shared rates R''_S in canonical order.
  std::vector<SubsetId> vars;
  for (const auto& s : nonempty_subsets(n)) {
    if (s.cardinality() >= 2) vars.push_back(s);
  }
  const int nv = static_cast<int>(vars.size());

  std::vector<detail::LinearRow> rows;
  // R'_l = R_l - sum_{S ∋ l} R''_S must stay nonnegative.
  for (int l = 1; l <= n; ++l) {
    detail::LinearRow row{std::vector<double>(static_cast<std::size_t>(nv), 0.0),
                          detail::RowSense::le, rates[static_cast<std::size_t>(l - 1)]};
    for (int j = 0; j < nv; ++j) {
      if (vars[static_cast<std::size_t>(j)].contains(l)) row.coeffs[static_cast<std::size_t>(j)] = 1.0;
    }
    rows.push_back(std::move(row));
  }
  // One row per upward-closed family after eliminating the refinement rates.
  const auto constraints = cms_constraints(pmf);
  for (const auto& c : constraints) {
    detail::LinearRow row{std::vector<double>(static_cast<std::size_t>(nv), 0.0),
                          detail::RowSense::ge, c.bound_bits};
    for (int l : c.base_support) row.rhs -= rates[static_cast<std::size_t>(l - 1)];
    for (int j = 0; j < nv; ++j) {
      double coeff = 0.0;
      if (std::find_if(c.shared_support.begin(), c.shared_support.end(),
                       [&](const SubsetId& s) { return s.mask() == vars[static_cast<std::size_t>(j)].mask(); }) !=
          c.shared_support.end()) {
        coeff += 1.0;
      }
      for (int l : c.base_support) {
        if (vars[static_cast<std::size_t>(j)].contains(l)) coeff -= 1.0;
      }
      row.coeffs[static_cast<std::size_t>(j)] = coeff;
    }
    rows.push_back(std::move(row));
  }

  const auto lp = detail::lp_feasible(nv, std::move(rows), kRateFeasibilityTol);
  FeasibilityResult out{lp.feasible, std::nullopt};
  if (lp.feasible) {
    AuxRateVector aux(n);
    for (int j = 0; j < nv; ++j) aux.set_shared(vars[static_cast<std::size_t>(j)], lp.x[static_cast<std::size_t>(j)]);
    for (int l = 1; l <= n; ++l) {
      double rp = rates[static_cast<std::size_t>(l - 1)];
      for (int j = 0; j < nv; ++j) {
        if (vars[static_cast<std::size_t>(j)].contains(l)) rp -= lp.x[static_cast<std::size_t>(j)];
      }
      aux.set_base(l, std::max(0.0, rp));  // clamp float dust within the LP tolerance
    }
    out.witness = std::move(aux);
  }
  return out;
}

ZbReplicaBounds zb_replica_bounds(const JointPmf& pmf) {
  if (pmf.channel_count() != 2) {
    throw std::domain_error("replica bounds are defined for exactly two channels");
  }
  const SubsetId s1({1}, 2), s2({2}, 2), s12({1, 2}, 2);
  const int g = pmf.find(RoleKind::shared, s12);
  const int f1 = pmf.find(RoleKind::layer, s1);
  const int f2 = pmf.find(RoleKind::layer, s2);
  const int f12 = pmf.find(RoleKind::layer, s12);
  if (g < 0 || f1 < 0 || f2 < 0 || f12 < 0) {
    throw std::domain_error(
        "replica bounds require V12, U1, U2 and U12 to be declared "
        "(use an alphabet of size 1 for a constant codeword)");
  }
  const int x = pmf.source_index();

  auto h = [&](std::initializer_list<int> a, std::initializer_list<int> b) {
    return conditional_entropy_bits(pmf, std::vector<int>(a), std::vector<int>(b));
  };
  const double i_x_f1g = h({f1, g}, {}) - h({f1, g}, {x});
  const double i_x_f2g = h({f2, g}, {}) - h({f2, g}, {x});
  const double i_x_g = h({g}, {}) - h({g}, {x});
  const double sum = 2.0 * i_x_g + h({f1}, {g}) + h({f2}, {g}) -
                     h({f1, f2, f12}, {x, g}) + h({f12}, {f1, f2, g});
  return {i_x_f1g, i_x_f2g, sum};
}

}  // namespace mdr
