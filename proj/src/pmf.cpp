#include "mdr/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mdr {

VariableRole VariableRole::source_role() { return {RoleKind::source, std::nullopt}; }

VariableRole VariableRole::shared_role(const SubsetId& s) {
  if (s.cardinality() < 2) {
    throw std::domain_error("shared codeword requires a subset of cardinality >= 2, got " +
                            s.label());
  }
  return {RoleKind::shared, s};
}

VariableRole VariableRole::layer_role(const SubsetId& s) { return {RoleKind::layer, s}; }

std::string VariableRole::name() const {
  switch (kind) {
    case RoleKind::source: return "X";
    case RoleKind::shared: return "V" + index->label();
    case RoleKind::layer: return "U" + index->label();
  }
  return "?";
}

JointPmf::JointPmf(int channel_count, std::vector<VariableRole> roles,
                   std::vector<int> alphabet_sizes, std::vector<double> probs)
    : channel_count_(channel_count),
      roles_(std::move(roles)),
      alphabet_(std::move(alphabet_sizes)),
      probs_(std::move(probs)),
      source_index_(-1) {
  if (channel_count_ < kMinChannels || channel_count_ > kMaxChannels) {
    throw std::domain_error("channel count out of range");
  }
  if (roles_.empty() || roles_.size() != alphabet_.size()) {
    throw std::domain_error("roles and alphabet sizes must be nonempty and aligned");
  }

  std::set<std::pair<int, std::uint32_t>> seen;
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    const auto& r = roles_[i];
    if (r.kind == RoleKind::source) {
      if (r.index.has_value()) throw std::domain_error("source role carries no subset");
      if (source_index_ >= 0) throw std::domain_error("exactly one source variable required");
      source_index_ = static_cast<int>(i);
      continue;
    }
    if (!r.index.has_value()) throw std::domain_error("codeword role requires a subset");
    if (r.index->channel_count() != channel_count_) {
      throw std::domain_error("role subset declared over a different channel count");
    }
    if (r.kind == RoleKind::shared && r.index->cardinality() < 2) {
      throw std::domain_error("shared codeword requires cardinality >= 2");
    }
    auto key = std::make_pair(static_cast<int>(r.kind), r.index->mask());
    if (!seen.insert(key).second) {
      throw std::domain_error("duplicate role " + r.name());
    }
  }
  if (source_index_ < 0) throw std::domain_error("exactly one source variable required");

  std::size_t total = 1;
  for (int a : alphabet_) {
    if (a < 1) throw std::domain_error("alphabet sizes must be >= 1");
    if (total > (std::size_t{1} << 28) / static_cast<std::size_t>(a)) {
      throw std::domain_error("joint alphabet too large");
    }
    total *= static_cast<std::size_t>(a);
  }
  if (probs_.size() != total) {
    throw std::domain_error("probability table has " + std::to_string(probs_.size()) +
                            " entries, expected " + std::to_string(total));
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::domain_error("probabilities must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::domain_error("probabilities must sum to 1 within 1e-12");
  }

  strides_.assign(roles_.size(), 1);
  for (int i = static_cast<int>(roles_.size()) - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * static_cast<std::size_t>(alphabet_[i + 1]);
  }
}

int JointPmf::find(RoleKind kind, const SubsetId& s) const {
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    const auto& r = roles_[i];
    if (r.kind == kind && r.index.has_value() && r.index->mask() == s.mask()) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

double JointPmf::entropy_bits(std::span<const int> vars) const {
  std::vector<int> sel(vars.begin(), vars.end());
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  for (int v : sel) {
    if (v < 0 || v >= variable_count()) {
      throw std::domain_error("variable index " + std::to_string(v) + " out of range");
    }
  }
  if (sel.empty()) return 0.0;

  // Marginalize onto the selected axes, then take -sum p log2 p with the
  // convention 0 log 0 = 0.
  std::size_t msize = 1;
  std::vector<std::size_t> mstride(sel.size());
  for (int i = static_cast<int>(sel.size()) - 1; i >= 0; --i) {
    mstride[static_cast<std::size_t>(i)] = msize;
    msize *= static_cast<std::size_t>(alphabet_[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])]);
  }
  std::vector<double> marg(msize, 0.0);
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
    const double p = probs_[idx];
    if (p == 0.0) continue;
    std::size_t midx = 0;
    for (std::size_t k = 0; k < sel.size(); ++k) {
      const auto v = static_cast<std::size_t>(sel[k]);
      midx += ((idx / strides_[v]) % static_cast<std::size_t>(alphabet_[v])) * mstride[k];
    }
    marg[midx] += p;
  }
  double h = 0.0;
  for (double p : marg) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double conditional_entropy_bits(const JointPmf& pmf, std::span<const int> a,
                                std::span<const int> b) {
  std::vector<int> joint(a.begin(), a.end());
  joint.insert(joint.end(), b.begin(), b.end());
  return pmf.entropy_bits(joint) - pmf.entropy_bits(b);
}

}  // namespace mdr
