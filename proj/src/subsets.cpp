#include "mdr/subsets.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace mdr {

namespace {

void check_channel_count(int channel_count) {
  if (channel_count < kMinChannels || channel_count > kMaxChannels) {
    throw std::domain_error("channel count must lie in [" + std::to_string(kMinChannels) +
                            ", " + std::to_string(kMaxChannels) + "], got " +
                            std::to_string(channel_count));
  }
}

}  // namespace

SubsetId::SubsetId(std::initializer_list<int> channels, int channel_count)
    : mask_(0), channel_count_(channel_count) {
  check_channel_count(channel_count);
  for (int ch : channels) {
    if (ch < 1 || ch > channel_count) {
      throw std::domain_error("channel " + std::to_string(ch) + " outside {1.." +
                              std::to_string(channel_count) + "}");
    }
    mask_ |= (1u << (ch - 1));
  }
  if (mask_ == 0) throw std::domain_error("subset must be nonempty");
}

SubsetId SubsetId::from_mask(std::uint32_t mask, int channel_count) {
  check_channel_count(channel_count);
  if (mask == 0) throw std::domain_error("subset must be nonempty");
  if (mask >= (1u << channel_count)) {
    throw std::domain_error("subset mask exceeds channel range");
  }
  return SubsetId(mask, channel_count);
}

int SubsetId::cardinality() const { return std::popcount(mask_); }

bool SubsetId::contains(int channel) const {
  return channel >= 1 && channel <= channel_count_ && (mask_ >> (channel - 1)) & 1u;
}

bool SubsetId::subset_of(const SubsetId& other) const {
  return (mask_ & ~other.mask_) == 0;
}

bool SubsetId::strict_superset_of(const SubsetId& other) const {
  return other.mask_ != mask_ && other.subset_of(*this);
}

bool SubsetId::intersects(const SubsetId& other) const {
  return (mask_ & other.mask_) != 0;
}

std::vector<int> SubsetId::channels() const {
  std::vector<int> out;
  for (int ch = 1; ch <= channel_count_; ++ch) {
    if (contains(ch)) out.push_back(ch);
  }
  return out;
}

std::string SubsetId::label() const {
  std::string out;
  for (int ch : channels()) out += std::to_string(ch);
  return out;
}

bool canonical_less(const SubsetId& a, const SubsetId& b) {
  if (a.cardinality() != b.cardinality()) return a.cardinality() < b.cardinality();
  const auto ca = a.channels();
  const auto cb = b.channels();
  return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
}

SubsetFamily::SubsetFamily(int channel_count) : channel_count_(channel_count) {
  check_channel_count(channel_count);
}

SubsetFamily::SubsetFamily(int channel_count,
                           std::initializer_list<std::initializer_list<int>> members)
    : SubsetFamily(channel_count) {
  for (const auto& m : members) insert(SubsetId(m, channel_count));
}

void SubsetFamily::insert(const SubsetId& s) {
  if (s.channel_count() != channel_count_) {
    throw std::domain_error("subset channel count differs from family channel count");
  }
  if (contains_mask(s.mask())) return;
  auto pos = std::lower_bound(members_.begin(), members_.end(), s, canonical_less);
  auto idx = static_cast<std::size_t>(pos - members_.begin());
  members_.insert(pos, s);
  masks_.insert(masks_.begin() + static_cast<std::ptrdiff_t>(idx), s.mask());
}

bool SubsetFamily::contains(const SubsetId& s) const {
  return s.channel_count() == channel_count_ && contains_mask(s.mask());
}

bool SubsetFamily::contains_mask(std::uint32_t mask) const {
  return std::find(masks_.begin(), masks_.end(), mask) != masks_.end();
}

SubsetFamily nonempty_subsets(int channel_count) {
  SubsetFamily out(channel_count);
  for (std::uint32_t mask = 1; mask < (1u << channel_count); ++mask) {
    out.insert(SubsetId::from_mask(mask, channel_count));
  }
  return out;
}

SubsetFamily strict_supersets(const SubsetId& b) {
  const int n = b.channel_count();
  SubsetFamily out(n);
  const std::uint32_t all = (1u << n) - 1;
  // Supersets of b are b | t for t ranging over subsets of the complement.
  const std::uint32_t comp = all & ~b.mask();
  for (std::uint32_t t = comp; t != 0; t = (t - 1) & comp) {
    out.insert(SubsetId::from_mask(b.mask() | t, n));
  }
  return out;
}

SubsetFamily sharing_sets(const SubsetId& k) {
  const int n = k.channel_count();
  SubsetFamily out(n);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if ((mask & k.mask()) != 0 && std::popcount(mask) >= 2) {
      out.insert(SubsetId::from_mask(mask, n));
    }
  }
  return out;
}

bool is_valid_q(const SubsetFamily& q) {
  for (const auto& member : q) {
    for (const auto& sup : strict_supersets(member)) {
      if (!q.contains(sup)) return false;
    }
  }
  return true;
}

std::vector<SubsetFamily> enumerate_q_star(int channel_count) {
  check_channel_count(channel_count);
  if (channel_count > kMaxEnumChannels) {
    throw std::domain_error("upward-closed family enumeration supports at most " +
                            std::to_string(kMaxEnumChannels) + " channels");
  }
  // Visit subsets in descending cardinality; a subset may be included only if
  // all its strict supersets already are.  DFS over that order yields every
  // upward-closed family exactly once.
  const SubsetFamily all = nonempty_subsets(channel_count);
  std::vector<SubsetId> order(all.begin(), all.end());
  std::sort(order.begin(), order.end(), [](const SubsetId& a, const SubsetId& b) {
    return canonical_less(b, a);  // descending canonical order
  });

  std::vector<SubsetFamily> result;
  std::vector<std::uint8_t> chosen(order.size(), 0);

  auto superset_ok = [&](std::size_t idx) {
    for (std::size_t j = 0; j < idx; ++j) {
      if (!chosen[j] && order[j].strict_superset_of(order[idx])) return false;
    }
    return true;
  };

  auto emit = [&]() {
    SubsetFamily fam(channel_count);
    bool any = false;
    for (std::size_t j = 0; j < order.size(); ++j) {
      if (chosen[j]) {
        fam.insert(order[j]);
        any = true;
      }
    }
    if (any) result.push_back(std::move(fam));
  };

  // Iterative DFS via recursion on index.
  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == order.size()) {
      emit();
      return;
    }
    // Exclude order[idx].
    self(self, idx + 1);
    // Include order[idx] if upward closure permits.
    if (superset_ok(idx)) {
      chosen[idx] = 1;
      self(self, idx + 1);
      chosen[idx] = 0;
    }
  };
  rec(rec, 0);

  // Canonical output order: ascending family size, ties by lexicographic
  // sequence of member ranks in the canonical subset order.
  std::vector<std::uint32_t> rank_of_mask(std::size_t{1} << channel_count, 0);
  {
    std::uint32_t r = 0;
    for (const auto& s : all) rank_of_mask[s.mask()] = r++;
  }
  auto rank_seq = [&](const SubsetFamily& fam) {
    std::vector<std::uint32_t> seq;
    seq.reserve(fam.size());
    for (const auto& s : fam) seq.push_back(rank_of_mask[s.mask()]);
    return seq;
  };
  std::sort(result.begin(), result.end(), [&](const SubsetFamily& a, const SubsetFamily& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return rank_seq(a) < rank_seq(b);
  });
  return result;
}

std::vector<int> singletons_of(const SubsetFamily& q) {
  std::vector<int> out;
  for (const auto& s : q) {
    if (s.cardinality() == 1) out.push_back(s.channels().front());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mdr
