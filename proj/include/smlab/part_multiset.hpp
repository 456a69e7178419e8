#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "smlab/errors.hpp"
#include "smlab/partition.hpp"

namespace smlab {

/// Multiset of part sizes in 1..capacity with O(log capacity) size-biased
/// lookup. Positions 0..total()-1 are laid out value by value in increasing
/// order, each copy of a value occupying `value` consecutive positions; this is
/// the concatenated-parts picture the (R, L) move sampler draws from.
class PartMultiset {
 public:
  struct Located {
    int value;
    std::int64_t copy;
    int offset;
  };

  PartMultiset() = default;

  explicit PartMultiset(int capacity)
      : cap_(capacity), tree_(static_cast<std::size_t>(capacity) + 1, 0), count_(static_cast<std::size_t>(capacity) + 1, 0) {
    if (capacity < 1) throw InvalidInput("multiset capacity must be positive");
    top_bit_ = 1;
    while (top_bit_ * 2 <= cap_) top_bit_ *= 2;
  }

  PartMultiset(const Partition& p, int capacity) : PartMultiset(capacity) {
    for (int a : p.parts()) insert(a);
  }

  int capacity() const { return cap_; }
  std::int64_t total() const { return total_; }
  std::int64_t parts() const { return parts_; }
  std::int64_t count(int v) const { return count_[static_cast<std::size_t>(v)]; }

  void insert(int v) {
    check(v);
    ++count_[static_cast<std::size_t>(v)];
    ++parts_;
    total_ += v;
    add(v, v);
  }

  void erase(int v) {
    check(v);
    if (count_[static_cast<std::size_t>(v)] == 0) throw std::logic_error("erasing absent part");
    --count_[static_cast<std::size_t>(v)];
    --parts_;
    total_ -= v;
    add(v, -v);
  }

  /// Part covering position `pos` in [0, total()).
  Located locate(std::int64_t pos) const {
    int idx = 0;
    for (int step = top_bit_; step > 0; step /= 2) {
      const int next = idx + step;
      if (next <= cap_ && tree_[static_cast<std::size_t>(next)] <= pos) {
        idx = next;
        pos -= tree_[static_cast<std::size_t>(next)];
      }
    }
    const int v = idx + 1;
    return {v, pos / v, static_cast<int>(pos % v)};
  }

  /// Sum of parts with value >= x.
  std::int64_t weight_at_least(double x) const {
    if (x <= 1) return total_;
    const double c = std::ceil(x);
    if (c > cap_) return 0;
    return total_ - prefix(static_cast<int>(c) - 1);
  }

  /// Parts in non-increasing order.
  std::vector<int> descending() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(parts_));
    for (int v = cap_; v >= 1; --v)
      for (std::int64_t k = 0; k < count_[static_cast<std::size_t>(v)]; ++k) out.push_back(v);
    return out;
  }

  /// Largest part, 0 when empty.
  int largest() const {
    for (int v = cap_; v >= 1; --v)
      if (count_[static_cast<std::size_t>(v)] > 0) return v;
    return 0;
  }

 private:
  void check(int v) const {
    if (v < 1 || v > cap_) throw InvalidInput("part size out of multiset range");
  }
  void add(int v, std::int64_t delta) {
    for (int i = v; i <= cap_; i += i & -i) tree_[static_cast<std::size_t>(i)] += delta;
  }
  std::int64_t prefix(int v) const {
    std::int64_t s = 0;
    for (int i = v; i > 0; i -= i & -i) s += tree_[static_cast<std::size_t>(i)];
    return s;
  }

  int cap_ = 0;
  int top_bit_ = 0;
  std::vector<std::int64_t> tree_;
  std::vector<std::int64_t> count_;
  std::int64_t total_ = 0;
  std::int64_t parts_ = 0;
};

}  // namespace smlab
