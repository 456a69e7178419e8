#pragma once

// The random transposition walk on S_n: at each step pick labels u and v
// independently and uniformly (u = v allowed) and compose with (u v). Its
// cycle type is the split-merge chain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "smlab/errors.hpp"
#include "smlab/exact.hpp"
#include "smlab/partition.hpp"
#include "smlab/rng.hpp"

namespace smlab {

inline constexpr int kMaxSymmetricGroupN = 6;

/// Permutation of {1..n} with per-element cycle ids and per-cycle sizes.
/// Composing with a transposition costs O(1) for the mapping plus O(size of
/// the smaller affected cycle) for the bookkeeping.
class CyclePermutation {
 public:
  explicit CyclePermutation(int n) : succ_(static_cast<std::size_t>(n)), cycle_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
    if (n < 1) throw InvalidInput("n must be positive");
    std::iota(succ_.begin(), succ_.end(), 0);
    std::iota(cycle_.begin(), cycle_.end(), 0);
  }

  /// From successor labels: mapping[i-1] is the image of label i.
  static CyclePermutation from_mapping(const std::vector<int>& mapping) {
    const int n = static_cast<int>(mapping.size());
    CyclePermutation p(n);
    std::vector<bool> hit(mapping.size(), false);
    for (int i = 0; i < n; ++i) {
      const int img = mapping[static_cast<std::size_t>(i)];
      if (img < 1 || img > n || hit[static_cast<std::size_t>(img - 1)]) throw InvalidInput("mapping is not a bijection on {1..n}");
      hit[static_cast<std::size_t>(img - 1)] = true;
      p.succ_[static_cast<std::size_t>(i)] = img - 1;
    }
    p.rebuild();
    return p;
  }

  int n() const { return static_cast<int>(succ_.size()); }
  int image(int label) const { return succ_[index(label)] + 1; }

  std::vector<int> mapping() const {
    std::vector<int> out(succ_.size());
    for (std::size_t i = 0; i < succ_.size(); ++i) out[i] = succ_[i] + 1;
    return out;
  }

  int cycle_size_of(int label) const { return size_[static_cast<std::size_t>(cycle_[index(label)])]; }
  bool same_cycle(int u, int v) const { return cycle_[index(u)] == cycle_[index(v)]; }

  /// Sizes of all cycles, unordered.
  std::vector<int> cycle_sizes() const {
    std::vector<int> out;
    for (int s : size_)
      if (s > 0) out.push_back(s);
    return out;
  }

  Partition cycle_type() const { return Partition(cycle_sizes()); }

  /// Cycle type by walking the mapping, ignoring the bookkeeping.
  Partition cycle_type_from_scratch() const {
    std::vector<bool> seen(succ_.size(), false);
    std::vector<int> sizes;
    for (std::size_t i = 0; i < succ_.size(); ++i) {
      if (seen[i]) continue;
      int len = 0;
      for (auto j = static_cast<int>(i); !seen[static_cast<std::size_t>(j)]; j = succ_[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        ++len;
      }
      sizes.push_back(len);
    }
    return Partition(sizes);
  }

  /// Every element's cycle id is shared exactly by its cycle and the recorded
  /// sizes match.
  bool bookkeeping_consistent() const {
    std::vector<bool> seen(succ_.size(), false);
    std::vector<int> counted(size_.size(), 0);
    for (std::size_t i = 0; i < succ_.size(); ++i) {
      if (seen[i]) continue;
      const int id = cycle_[i];
      int len = 0;
      for (auto j = static_cast<int>(i); !seen[static_cast<std::size_t>(j)]; j = succ_[static_cast<std::size_t>(j)]) {
        if (cycle_[static_cast<std::size_t>(j)] != id) return false;
        seen[static_cast<std::size_t>(j)] = true;
        ++len;
      }
      if (counted[static_cast<std::size_t>(id)] != 0 || size_[static_cast<std::size_t>(id)] != len) return false;
      counted[static_cast<std::size_t>(id)] = len;
    }
    for (std::size_t id = 0; id < size_.size(); ++id)
      if (size_[id] != counted[id]) return false;
    return true;
  }

  /// this <- this o (u v) for labels u, v in {1..n}; u == v leaves it unchanged.
  void transpose(int u, int v) {
    const std::size_t a = index(u), b = index(v);
    if (a == b) return;
    if (cycle_[a] == cycle_[b]) {
      split(static_cast<int>(a), static_cast<int>(b));
    } else {
      merge(static_cast<int>(a), static_cast<int>(b));
    }
  }

 private:
  std::size_t index(int label) const {
    if (label < 1 || label > n()) throw InvalidInput("label out of range");
    return static_cast<std::size_t>(label - 1);
  }

  void rebuild() {
    std::fill(cycle_.begin(), cycle_.end(), -1);
    std::fill(size_.begin(), size_.end(), 0);
    int next_id = 0;
    for (std::size_t i = 0; i < succ_.size(); ++i) {
      if (cycle_[i] >= 0) continue;
      int len = 0;
      for (auto j = static_cast<int>(i); cycle_[static_cast<std::size_t>(j)] < 0; j = succ_[static_cast<std::size_t>(j)]) {
        cycle_[static_cast<std::size_t>(j)] = next_id;
        ++len;
      }
      size_[static_cast<std::size_t>(next_id++)] = len;
    }
    free_ids_.clear();
    for (int id = n() - 1; id >= next_id; --id) free_ids_.push_back(id);
  }

  int unused_id() const {
    // at most n cycles exist, and this one is being created, so an empty slot exists
    for (std::size_t id = 0; id < size_.size(); ++id)
      if (size_[id] == 0) return static_cast<int>(id);
    throw std::logic_error("no free cycle id");
  }

  void relabel(int start, int id) {
    int j = start;
    do {
      cycle_[static_cast<std::size_t>(j)] = id;
      j = succ_[static_cast<std::size_t>(j)];
    } while (j != start);
  }

  void split(int a, int b) {
    std::swap(succ_[static_cast<std::size_t>(a)], succ_[static_cast<std::size_t>(b)]);
    // walk both new cycles in lockstep; the first to close is the smaller
    int x = a, y = b, len = 0, smaller = a;
    while (true) {
      x = succ_[static_cast<std::size_t>(x)];
      y = succ_[static_cast<std::size_t>(y)];
      ++len;
      if (x == a) {
        smaller = a;
        break;
      }
      if (y == b) {
        smaller = b;
        break;
      }
    }
    const int old_id = cycle_[static_cast<std::size_t>(a)];
    const int id = next_free_id();
    relabel(smaller, id);
    size_[static_cast<std::size_t>(id)] = len;
    size_[static_cast<std::size_t>(old_id)] -= len;
  }

  void merge(int a, int b) {
    const int ida = cycle_[static_cast<std::size_t>(a)], idb = cycle_[static_cast<std::size_t>(b)];
    const bool a_smaller = size_[static_cast<std::size_t>(ida)] < size_[static_cast<std::size_t>(idb)];
    const int small_start = a_smaller ? a : b;
    const int small_id = a_smaller ? ida : idb, big_id = a_smaller ? idb : ida;
    relabel(small_start, big_id);
    size_[static_cast<std::size_t>(big_id)] += size_[static_cast<std::size_t>(small_id)];
    size_[static_cast<std::size_t>(small_id)] = 0;
    free_ids_.push_back(small_id);
    std::swap(succ_[static_cast<std::size_t>(a)], succ_[static_cast<std::size_t>(b)]);
  }

  int next_free_id() {
    while (!free_ids_.empty()) {
      const int id = free_ids_.back();
      free_ids_.pop_back();
      if (size_[static_cast<std::size_t>(id)] == 0) return id;
    }
    return unused_id();
  }

  std::vector<int> succ_;
  std::vector<int> cycle_;
  std::vector<int> size_;
  std::vector<int> free_ids_;
};

inline CyclePermutation apply_transposition(CyclePermutation perm, int u, int v) {
  perm.transpose(u, v);
  return perm;
}

/// Ordered label pair (u, v), each uniform on {1..n}.
inline std::pair<int, int> draw_transposition(int n, Rng& rng) {
  const auto u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
  const auto v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
  return {u, v};
}

inline void walk_step(CyclePermutation& perm, Rng& rng) {
  const auto [u, v] = draw_transposition(perm.n(), rng);
  perm.transpose(u, v);
}

/// All of S_n (n <= 6) indexed in lexicographic order of one-line notation,
/// with the right-multiplication table by each transposition (i j), i < j.
struct SymmetricGroup {
  int n = 0;
  std::vector<std::vector<int>> elements;
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> times_transposition;

  explicit SymmetricGroup(int n_) : n(n_) {
    if (n < 1) throw InvalidInput("n must be positive");
    if (n > kMaxSymmetricGroupN) throw ResourceGuard("S_n enumeration limited to n <= 6");
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do {
      index.emplace(p, static_cast<int>(elements.size()));
      elements.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    times_transposition.resize(elements.size());
    for (std::size_t k = 0; k < elements.size(); ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          auto q = elements[k];
          std::swap(q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(j)]);
          times_transposition[k].push_back(index.at(q));
        }
      }
    }
  }
};

/// ||Pbar^t(id, .) - uniform||_TV on S_n by iterating the full kernel.
inline long double exact_d_sn(int n, int t) {
  if (t < 0) throw InvalidInput("t must be nonnegative");
  const SymmetricGroup g(n);
  const std::size_t size = g.elements.size();
  const long double stay = 1.0L / n;
  const long double move = 2.0L / (static_cast<long double>(n) * n);
  std::vector<long double> v(size, 0.0L), next(size);
  v[0] = 1.0L;  // identity is first lexicographically
  for (int s = 0; s < t; ++s) {
    for (std::size_t k = 0; k < size; ++k) next[k] = v[k] * stay;
    for (std::size_t k = 0; k < size; ++k)
      for (int j : g.times_transposition[k]) next[static_cast<std::size_t>(j)] += v[k] * move;
    v.swap(next);
  }
  long double l1 = 0;
  const long double u = 1.0L / static_cast<long double>(size);
  for (auto x : v) l1 += std::fabs(x - u);
  return l1 / 2;
}

/// Largest one-step meeting probability any Markovian coupling can give two
/// distinct states of the transposition walk: max over alpha != beta of
/// 1 - TV(Pbar(alpha, .), Pbar(beta, .)), exact.
inline Rational markovian_one_step_bound(int n) {
  const SymmetricGroup g(n);
  const std::size_t size = g.elements.size();
  // rows as sorted (index, numerator over n^2)
  std::vector<std::vector<std::pair<int, std::int64_t>>> rows(size);
  for (std::size_t k = 0; k < size; ++k) {
    std::map<int, std::int64_t> r{{static_cast<int>(k), n}};
    for (int j : g.times_transposition[k]) r[j] += 2;
    rows[k].assign(r.begin(), r.end());
  }
  auto overlap = [&](std::size_t a, std::size_t b) {
    std::int64_t total = 0;
    auto i = rows[a].begin(), j = rows[b].begin();
    while (i != rows[a].end() && j != rows[b].end()) {
      if (i->first < j->first) {
        ++i;
      } else if (j->first < i->first) {
        ++j;
      } else {
        total += std::min(i->second, j->second);
        ++i;
        ++j;
      }
    }
    return total;
  };
  std::int64_t best = 0;
  for (std::size_t a = 0; a < size; ++a)
    for (std::size_t b = a + 1; b < size; ++b) best = std::max(best, overlap(a, b));
  return Rational(best, static_cast<std::int64_t>(n) * n);
}

/// Union-find over {1..n} tracking the largest component of the graph whose
/// edges are the transpositions applied so far.
class GraphState {
 public:
  explicit GraphState(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1), largest_(n > 0 ? 1 : 0) {
    if (n < 1) throw InvalidInput("n must be positive");
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int n() const { return static_cast<int>(parent_.size()); }
  int largest() const { return largest_; }
  int component_size(int label) { return size_[static_cast<std::size_t>(find(label - 1))]; }

  /// Adds edge {u, v}; a self-pair adds nothing.
  void add_edge(int u, int v) {
    if (u < 1 || u > n() || v < 1 || v > n()) throw InvalidInput("label out of range");
    int a = find(u - 1), b = find(v - 1);
    if (a == b) return;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    largest_ = std::max(largest_, size_[static_cast<std::size_t>(a)]);
  }

  /// Component sizes in non-increasing order.
  std::vector<int> component_sizes() {
    std::vector<int> out;
    for (int i = 0; i < n(); ++i)
      if (find(i) == i) out.push_back(size_[static_cast<std::size_t>(i)]);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }

 private:
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }

  std::vector<int> parent_;
  std::vector<int> size_;
  int largest_;
};

/// |W_t| for t = 0..t_max under uniform ordered pairs.
inline std::vector<int> graph_track(int n, std::int64_t t_max, Rng& rng) {
  GraphState g(n);
  std::vector<int> out{g.largest()};
  out.reserve(static_cast<std::size_t>(t_max) + 1);
  for (std::int64_t t = 0; t < t_max; ++t) {
    const auto [u, v] = draw_transposition(n, rng);
    g.add_edge(u, v);
    out.push_back(g.largest());
  }
  return out;
}

}  // namespace smlab
