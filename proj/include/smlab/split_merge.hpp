#pragma once

// The split-merge chain on partitions of n: from (a_1..a_m) split one part,
// merge two parts, or stay. Its kernel is the cycle-type projection of the
// random transposition walk, so every probability has denominator n^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <vector>

#include "smlab/errors.hpp"
#include "smlab/exact.hpp"
#include "smlab/part_multiset.hpp"
#include "smlab/partition.hpp"
#include "smlab/rng.hpp"

namespace smlab {

inline constexpr int kMaxMatrixN = 30;
inline constexpr int kMaxExactN = 12;

struct SparseDistribution {
  std::map<Partition, Rational> entries;

  Rational total() const {
    Rational t = 0;
    for (const auto& [p, w] : entries) t += w;
    return t;
  }
  Rational at(const Partition& p) const {
    auto it = entries.find(p);
    return it == entries.end() ? Rational(0) : it->second;
  }
};

/// One-step law of the chain from `p`, as integer numerators over n^2.
inline std::map<Partition, std::int64_t> transition_weights(const Partition& p) {
  const std::int64_t n = p.n();
  std::map<Partition, std::int64_t> out;
  out[p] += n;

  const auto& a = p.parts();
  // distinct values with multiplicities
  std::vector<std::pair<int, std::int64_t>> groups;
  for (int v : a) {
    if (!groups.empty() && groups.back().first == v)
      ++groups.back().second;
    else
      groups.emplace_back(v, 1);
  }

  auto replaced = [&](std::initializer_list<int> remove, std::initializer_list<int> add) {
    auto parts = a;
    for (int v : remove) parts.erase(std::find(parts.begin(), parts.end(), v));
    parts.insert(parts.end(), add);
    return Partition(std::move(parts));
  };

  for (const auto& [v, k] : groups) {
    for (int r = 1; 2 * r <= v; ++r) {
      const std::int64_t w = (2 * r < v ? 2 * v : v) * k;
      out[replaced({v}, {r, v - r})] += w;
    }
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto [u, ku] = groups[i];
    if (ku >= 2) out[replaced({u, u}, {2 * u})] += ku * (ku - 1) / 2 * 2 * u * u;
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      const auto [v, kv] = groups[j];
      out[replaced({u, v}, {u + v})] += ku * kv * 2 * u * v;
    }
  }
  return out;
}

inline SparseDistribution transition_distribution(const Partition& p) {
  const std::int64_t n2 = static_cast<std::int64_t>(p.n()) * p.n();
  SparseDistribution d;
  for (const auto& [q, w] : transition_weights(p)) d.entries.emplace(q, Rational(w, n2));
  return d;
}

/// One move of the chain: draw ordered positions (R, L) uniformly from the
/// concatenated parts; equal positions stay, positions in one part split it at
/// their cyclic distance, positions in different parts merge them.
inline Partition step(const Partition& p, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(p.n());
  const auto R = static_cast<std::int64_t>(rng.below(n));
  const auto L = static_cast<std::int64_t>(rng.below(n));
  if (R == L) return p;
  const auto& a = p.parts();
  auto locate = [&](std::int64_t pos) {
    std::size_t i = 0;
    while (pos >= a[i]) pos -= a[i++];
    return std::pair{i, pos};
  };
  const auto [iR, oR] = locate(R);
  const auto [iL, oL] = locate(L);
  auto parts = a;
  if (iR == iL) {
    const int v = a[iR];
    const int r = static_cast<int>(((oL - oR) % v + v) % v);
    parts[iR] = v - r;
    parts.push_back(r);
  } else {
    parts[iR] += parts[iL];
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(iL));
  }
  return Partition(std::move(parts));
}

/// The chain for large n: parts kept in a PartMultiset, O(log n) per step.
class SplitMergeProcess {
 public:
  explicit SplitMergeProcess(const Partition& start) : n_(start.n()), parts_(start, start.n()) {}

  int n() const { return n_; }
  const PartMultiset& parts() const { return parts_; }
  Partition state() const { return Partition(parts_.descending()); }

  void step(Rng& rng) {
    const auto n = static_cast<std::uint64_t>(n_);
    const auto R = static_cast<std::int64_t>(rng.below(n));
    const auto L = static_cast<std::int64_t>(rng.below(n));
    if (R == L) return;
    const auto a = parts_.locate(R), b = parts_.locate(L);
    if (a.value == b.value && a.copy == b.copy) {
      const int r = ((b.offset - a.offset) % a.value + a.value) % a.value;
      parts_.erase(a.value);
      parts_.insert(r);
      parts_.insert(a.value - r);
    } else {
      parts_.erase(a.value);
      parts_.erase(b.value);
      parts_.insert(a.value + b.value);
    }
  }

 private:
  int n_;
  PartMultiset parts_;
};

/// Kernel over all partitions of n in reverse lexicographic order; weights are
/// numerators over n^2.
struct TransitionMatrix {
  int n = 0;
  std::vector<Partition> states;
  std::map<Partition, int> index;
  std::vector<std::vector<std::pair<int, std::int64_t>>> rows;

  SparseDistribution row(std::size_t i) const {
    const std::int64_t n2 = static_cast<std::int64_t>(n) * n;
    SparseDistribution d;
    for (const auto& [j, w] : rows[i]) d.entries.emplace(states[static_cast<std::size_t>(j)], Rational(w, n2));
    return d;
  }
};

inline TransitionMatrix build_matrix(int n) {
  if (n < 1) throw InvalidInput("n must be positive");
  if (n > kMaxMatrixN) throw ResourceGuard("transition matrix limited to n <= 30");
  TransitionMatrix m;
  m.n = n;
  m.states = all_partitions(n);
  for (int i = 0; i < static_cast<int>(m.states.size()); ++i) m.index.emplace(m.states[static_cast<std::size_t>(i)], i);
  m.rows.resize(m.states.size());
  for (std::size_t i = 0; i < m.states.size(); ++i)
    for (const auto& [q, w] : transition_weights(m.states[i])) m.rows[i].emplace_back(m.index.at(q), w);
  return m;
}

/// Exact distance to stationarity from (1^n), advanced one step at a time.
/// The distribution is carried as integer numerators over n^(2t).
class ExactDistanceScan {
 public:
  explicit ExactDistanceScan(int n) : matrix_(checked_matrix(n)), nfact_(factorial(n)), n2_(BigInt(n) * n) {
    const std::size_t k = matrix_.states.size();
    class_sizes_.resize(k);
    for (std::size_t i = 0; i < k; ++i) class_sizes_[i] = perm_count(matrix_.states[i]);
    mass_.assign(k, 0);
    mass_[k - 1] = 1;  // (1^n) is last in reverse lexicographic order
  }

  int t() const { return t_; }

  /// d(t) = ||P^t((1^n), .) - pi||_TV.
  Rational distance() const {
    BigInt l1 = 0;
    for (std::size_t i = 0; i < mass_.size(); ++i) l1 += abs(mass_[i] * nfact_ - class_sizes_[i] * denom_);
    return Rational(l1, 2 * nfact_ * denom_);
  }

  void advance() {
    std::vector<BigInt> next(mass_.size(), 0);
    for (std::size_t i = 0; i < mass_.size(); ++i) {
      if (mass_[i] == 0) continue;
      for (const auto& [j, w] : matrix_.rows[i]) next[static_cast<std::size_t>(j)] += mass_[i] * w;
    }
    mass_.swap(next);
    denom_ *= n2_;
    ++t_;
  }

 private:
  static TransitionMatrix checked_matrix(int n) {
    if (n > kMaxExactN) throw ResourceGuard("exact distance limited to n <= 12");
    return build_matrix(n);
  }

  TransitionMatrix matrix_;
  BigInt nfact_;
  BigInt n2_;
  BigInt denom_ = 1;
  std::vector<BigInt> class_sizes_;
  std::vector<BigInt> mass_;
  int t_ = 0;
};

/// Exact d(0..t_max).
inline std::vector<Rational> exact_distance_curve(int n, int t_max) {
  if (t_max < 0) throw InvalidInput("t must be nonnegative");
  ExactDistanceScan scan(n);
  std::vector<Rational> curve{scan.distance()};
  while (scan.t() < t_max) {
    scan.advance();
    curve.push_back(scan.distance());
  }
  return curve;
}

inline Rational exact_d(int n, int t) { return exact_distance_curve(n, t).back(); }

/// Double-precision d(0..t_max) for n up to 30.
inline std::vector<double> distance_curve_real(int n, int t_max) {
  if (t_max < 0) throw InvalidInput("t must be nonnegative");
  const auto m = build_matrix(n);
  const std::size_t k = m.states.size();
  const double n2 = static_cast<double>(n) * n;
  std::vector<long double> pi(k);
  for (std::size_t i = 0; i < k; ++i) pi[i] = static_cast<long double>(to_double(stationary(m.states[i])));
  std::vector<long double> v(k, 0), next(k);
  v[k - 1] = 1;
  std::vector<double> curve;
  for (int t = 0;; ++t) {
    long double l1 = 0;
    for (std::size_t i = 0; i < k; ++i) l1 += std::fabs(v[i] - pi[i]);
    curve.push_back(static_cast<double>(l1 / 2));
    if (t == t_max) break;
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t i = 0; i < k; ++i)
      for (const auto& [j, w] : m.rows[i]) next[static_cast<std::size_t>(j)] += v[i] * (static_cast<long double>(w) / n2);
    v.swap(next);
  }
  return curve;
}

/// min{t : d(t) <= eps}. The scan checks d(t+1) <= d(t) + 1e-15 at every
/// step and throws std::logic_error if the curve ever rises.
inline int mixing_time_exact(int n, const Rational& eps, int t_limit = 10000) {
  if (eps <= 0) throw InvalidInput("eps must be positive");
  ExactDistanceScan scan(n);
  const Rational slack(1, BigInt(1000000000000000LL));
  Rational prev = scan.distance();
  while (prev > eps) {
    if (scan.t() >= t_limit) throw ResourceGuard("mixing time scan exceeded its step limit");
    scan.advance();
    const Rational d = scan.distance();
    if (d > prev + slack) throw std::logic_error("distance to stationarity increased during scan");
    prev = d;
  }
  return scan.t();
}

}  // namespace smlab
