#pragma once

// Integer partitions as states of the split-merge chain: canonical form,
// conjugacy-class sizes, the stationary law, the split-merge graph metric and
// the neighbor-pair statistics s and m.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "smlab/errors.hpp"
#include "smlab/exact.hpp"

namespace smlab {

/// Largest n for which breadth-first searches over all partitions are allowed.
inline constexpr int kMaxGraphN = 40;

/// Non-increasing sequence of positive parts.
class Partition {
 public:
  Partition() = default;

  /// Sorts `parts` non-increasing; throws InvalidInput on an empty sequence or
  /// a non-positive entry.
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw InvalidInput("partition must have at least one part");
    std::int64_t total = 0;
    for (int a : parts_) {
      if (a < 1) throw InvalidInput("partition parts must be positive");
      total += a;
    }
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
    n_ = static_cast<int>(total);
  }

  static Partition ones(int n) { return Partition(std::vector<int>(static_cast<std::size_t>(n), 1)); }

  const std::vector<int>& parts() const { return parts_; }
  int n() const { return n_; }
  std::size_t size() const { return parts_.size(); }
  int operator[](std::size_t i) const { return parts_[i]; }

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

  std::string to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << ')';
    return os.str();
  }

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Partition& p) { return os << p.to_string(); }

inline Partition canonicalize(std::vector<int> raw_parts) { return Partition(std::move(raw_parts)); }

/// Number of permutations of {1..n} whose cycle type is `p`:
/// n! / (prod parts * prod multiplicity!).
inline BigInt perm_count(const Partition& p) {
  BigInt denom = 1;
  const auto& a = p.parts();
  for (std::size_t i = 0; i < a.size();) {
    std::size_t j = i;
    while (j < a.size() && a[j] == a[i]) ++j;
    const auto mult = static_cast<int>(j - i);
    for (int k = 0; k < mult; ++k) denom *= a[i];
    denom *= factorial(mult);
    i = j;
  }
  return factorial(p.n()) / denom;
}

/// Stationary probability of `p`: the uniform law on S_n pushed to cycle types.
inline Rational stationary(const Partition& p) { return Rational(perm_count(p), factorial(p.n())); }

/// Parts present in one partition and not the other, as multisets.
struct PartDifference {
  std::vector<int> only_first;
  std::vector<int> only_second;
};

inline PartDifference part_difference(const Partition& p, const Partition& q) {
  PartDifference d;
  const auto& a = p.parts();
  const auto& b = q.parts();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] > b[j])) {
      d.only_first.push_back(a[i++]);
    } else if (i == a.size() || b[j] > a[i]) {
      d.only_second.push_back(b[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  return d;
}

/// Smallest and medium differing parts of a neighbor pair. For equal
/// partitions s = n/2 and m = n.
struct PairStats {
  Rational s;
  Rational m;
};

/// {b, c} with b <= c when p and q differ by exactly one merge; empty otherwise.
inline std::optional<std::pair<int, int>> merge_difference(const Partition& p, const Partition& q) {
  auto d = part_difference(p, q);
  auto check = [](const std::vector<int>& two, const std::vector<int>& one) -> std::optional<std::pair<int, int>> {
    if (two.size() == 2 && one.size() == 1 && two[0] + two[1] == one[0])
      return std::pair{std::min(two[0], two[1]), std::max(two[0], two[1])};
    return std::nullopt;
  };
  if (auto r = check(d.only_first, d.only_second)) return r;
  return check(d.only_second, d.only_first);
}

inline PairStats pair_stats(const Partition& p, const Partition& q) {
  if (p.n() != q.n()) throw InvalidInput("partitions of different n");
  if (p == q) return {Rational(p.n(), 2), Rational(p.n())};
  auto bc = merge_difference(p, q);
  if (!bc) throw NotNeighbors("pair " + p.to_string() + ", " + q.to_string() + " is not at distance one");
  return {Rational(bc->first), Rational(bc->second)};
}

/// All partitions reachable by one split or one merge.
inline std::set<Partition> neighbors(const Partition& p) {
  std::set<Partition> out;
  const auto& a = p.parts();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0 && a[i] == a[i - 1]) continue;
    for (int r = 1; 2 * r <= a[i]; ++r) {
      auto next = a;
      next[i] = a[i] - r;
      next.push_back(r);
      out.insert(Partition(std::move(next)));
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      auto next = a;
      next[i] += next[j];
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(j));
      out.insert(Partition(std::move(next)));
    }
  }
  return out;
}

/// All partitions of n in reverse lexicographic order: (n), (n-1,1), ..., (1^n).
inline std::vector<Partition> all_partitions(int n) {
  if (n < 1) throw InvalidInput("n must be positive");
  if (n > 80) throw ResourceGuard("partition enumeration limited to n <= 80");
  std::vector<Partition> out;
  std::vector<int> cur{n};
  while (true) {
    out.emplace_back(cur);
    // rightmost part greater than one
    int k = static_cast<int>(cur.size()) - 1;
    int ones = 0;
    while (k >= 0 && cur[static_cast<std::size_t>(k)] == 1) {
      ++ones;
      --k;
    }
    if (k < 0) break;
    const int v = --cur[static_cast<std::size_t>(k)];
    int rem = ones + 1;
    cur.resize(static_cast<std::size_t>(k) + 1);
    while (rem > 0) {
      const int piece = std::min(v, rem);
      cur.push_back(piece);
      rem -= piece;
    }
  }
  return out;
}

/// The split-merge graph on all partitions of n.
struct PartitionGraph {
  std::vector<Partition> states;
  std::map<Partition, int> index;
  std::vector<std::vector<int>> adjacency;

  explicit PartitionGraph(int n) {
    if (n > kMaxGraphN) throw ResourceGuard("split-merge graph limited to n <= 40");
    states = all_partitions(n);
    for (int i = 0; i < static_cast<int>(states.size()); ++i) index.emplace(states[static_cast<std::size_t>(i)], i);
    adjacency.resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
      for (const auto& q : neighbors(states[i])) adjacency[i].push_back(index.at(q));
  }

  std::vector<int> distances_from(int source) const {
    std::vector<int> dist(states.size(), -1);
    std::queue<int> frontier;
    dist[static_cast<std::size_t>(source)] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v : adjacency[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
          frontier.push(v);
        }
      }
    }
    return dist;
  }
};

/// Split-merge distance: the fewest moves turning p into q.
inline int rho(const Partition& p, const Partition& q) {
  if (p.n() != q.n()) throw InvalidInput("partitions of different n");
  if (p == q) return 0;
  if (p.n() > kMaxGraphN) throw ResourceGuard("rho limited to n <= 40");
  std::map<Partition, int> dist{{p, 0}};
  std::queue<Partition> frontier;
  frontier.push(p);
  while (!frontier.empty()) {
    auto u = frontier.front();
    frontier.pop();
    const int du = dist.at(u);
    for (const auto& v : neighbors(u)) {
      if (dist.contains(v)) continue;
      if (v == q) return du + 1;
      dist.emplace(v, du + 1);
      frontier.push(v);
    }
  }
  throw std::logic_error("split-merge graph is disconnected");
}

inline int diameter(int n) {
  if (n < 1) throw InvalidInput("n must be positive");
  if (n > kMaxGraphN) throw ResourceGuard("diameter limited to n <= 40");
  PartitionGraph g(n);
  int best = 0;
  for (int i = 0; i < static_cast<int>(g.states.size()); ++i) {
    for (int d : g.distances_from(i)) best = std::max(best, d);
  }
  return best;
}

/// Total size of the parts of size at least x.
inline std::int64_t v_stat(const Partition& p, double x) {
  std::int64_t total = 0;
  for (int a : p.parts()) {
    if (a >= x) total += a;
  }
  return total;
}

}  // namespace smlab
