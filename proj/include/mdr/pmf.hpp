#pragma once

// Dense joint pmf over a source variable and auxiliary codeword variables,
// with Shannon entropy in bits.  Variables are tagged by role: the source X,
// shared codewords V_S (|S| >= 2), and layer codewords U_K (K nonempty).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdr/subsets.hpp"

namespace mdr {

enum class RoleKind { source, shared, layer };

struct VariableRole {
  RoleKind kind;
  std::optional<SubsetId> index;  // engaged for shared/layer, empty for source

  static VariableRole source_role();
  static VariableRole shared_role(const SubsetId& s);  // requires |s| >= 2
  static VariableRole layer_role(const SubsetId& s);
  std::string name() const;  // "X", "V13", "U2"
};

class JointPmf {
 public:
  // probs is row-major over the variable axes in declaration order (last
  // variable fastest).  Probabilities must be nonnegative and sum to 1 within
  // 1e-12; exactly one source role; no duplicate (kind, subset) pair.
  JointPmf(int channel_count, std::vector<VariableRole> roles,
           std::vector<int> alphabet_sizes, std::vector<double> probs);

  int channel_count() const { return channel_count_; }
  int variable_count() const { return static_cast<int>(roles_.size()); }
  const std::vector<VariableRole>& roles() const { return roles_; }
  const std::vector<int>& alphabet_sizes() const { return alphabet_; }
  const std::vector<double>& probs() const { return probs_; }

  int source_index() const { return source_index_; }
  // Position of the variable with the given role, or -1 when absent.
  int find(RoleKind kind, const SubsetId& s) const;
  bool has(RoleKind kind, const SubsetId& s) const { return find(kind, s) >= 0; }

  // H({vars}) in bits; indices into the declaration order, duplicates ignored.
  double entropy_bits(std::span<const int> vars) const;

 private:
  int channel_count_;
  std::vector<VariableRole> roles_;
  std::vector<int> alphabet_;
  std::vector<double> probs_;
  std::vector<std::size_t> strides_;
  int source_index_;
};

// H(A | B) = H(A u B) - H(B), in bits.  Indices must be valid variable
// positions; A and B need not be disjoint (shared indices collapse).
double conditional_entropy_bits(const JointPmf& pmf, std::span<const int> a,
                                std::span<const int> b);

}  // namespace mdr
