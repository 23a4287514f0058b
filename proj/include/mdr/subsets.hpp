#pragma once

// Subset lattice over channel indices {1..L}: identifiers, superset families,
// upward-closed family validation and enumeration.  Channels are 1-based in
// the public interface; internally a subset is a bitmask with bit (i-1) for
// channel i.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace mdr {

inline constexpr int kMinChannels = 2;
inline constexpr int kMaxChannels = 16;      // SubsetId capacity
inline constexpr int kMaxEnumChannels = 5;   // enumerate_q_star capacity

// Nonempty subset of {1..L}.
class SubsetId {
 public:
  SubsetId(std::initializer_list<int> channels, int channel_count);
  static SubsetId from_mask(std::uint32_t mask, int channel_count);

  std::uint32_t mask() const { return mask_; }
  int channel_count() const { return channel_count_; }
  int cardinality() const;
  bool contains(int channel) const;
  bool subset_of(const SubsetId& other) const;
  bool strict_superset_of(const SubsetId& other) const;
  bool intersects(const SubsetId& other) const;
  std::vector<int> channels() const;  // ascending
  std::string label() const;          // e.g. "13" for {1,3}

  friend bool operator==(const SubsetId& a, const SubsetId& b) {
    return a.mask_ == b.mask_ && a.channel_count_ == b.channel_count_;
  }
  friend bool operator!=(const SubsetId& a, const SubsetId& b) { return !(a == b); }

 private:
  SubsetId(std::uint32_t mask, int channel_count) : mask_(mask), channel_count_(channel_count) {}
  std::uint32_t mask_;
  int channel_count_;
};

// Canonical order: ascending cardinality, ties broken lexicographically on the
// ascending channel list ({1,4} before {2,3}).
bool canonical_less(const SubsetId& a, const SubsetId& b);

// Ordered collection of distinct nonempty subsets of a common {1..L}.
class SubsetFamily {
 public:
  explicit SubsetFamily(int channel_count);
  SubsetFamily(int channel_count, std::initializer_list<std::initializer_list<int>> members);

  void insert(const SubsetId& s);  // keeps canonical order; duplicate inserts ignored
  bool contains(const SubsetId& s) const;
  bool contains_mask(std::uint32_t mask) const;
  int channel_count() const { return channel_count_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<SubsetId>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const SubsetFamily& a, const SubsetFamily& b) {
    return a.channel_count_ == b.channel_count_ && a.masks_ == b.masks_;
  }

 private:
  int channel_count_;
  std::vector<SubsetId> members_;       // canonical order
  std::vector<std::uint32_t> masks_;    // parallel to members_
};

// All 2^L - 1 nonempty subsets of {1..L} in canonical order.
SubsetFamily nonempty_subsets(int channel_count);

// Strict supersets of b within its {1..L}, canonical order.
SubsetFamily strict_supersets(const SubsetId& b);

// All subsets that share at least one channel with k and have cardinality >= 2,
// i.e. the union over channels l of k of the superset families of {l} restricted
// to non-singletons.  Canonical order.
SubsetFamily sharing_sets(const SubsetId& k);

// True iff q is upward closed under strict supersets: every strict superset of
// every member is itself a member.  The empty family is vacuously valid.
bool is_valid_q(const SubsetFamily& q);

// All nonempty upward-closed families over {1..L} in a fixed canonical order
// (ascending family size, ties by lexicographic member rank sequence).
// channel_count is capped at kMaxEnumChannels: the count grows as the Dedekind
// numbers and is out of reach beyond L = 5 (7579 families).
std::vector<SubsetFamily> enumerate_q_star(int channel_count);

// The singleton members of q, as ascending channel indices.
std::vector<int> singletons_of(const SubsetFamily& q);

}  // namespace mdr
