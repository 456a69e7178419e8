#pragma once

// Coupling of two split-merge chains started at a neighbor pair
//
//   sigma = (a_1, ..., a_k, b, c),   tau = (a_1, ..., a_k, b + c),   b <= c.
//
// Moves of sigma are paired with moves of tau as follows:
//   - operations only on the shared a_i are copied;
//   - merging b or c with a_i is paired with merging b + c with a_i;
//   - splitting b or c into {r, . } (r at most half) is paired with splitting
//     b + c into {r, b + c - r};
//   - staying in sigma is paired with splitting b + c into {b, c} with
//     probability min(p, 1/n), p being what is left of that split, and with
//     staying in tau otherwise;
//   - merging b and c absorbs everything tau has left: the unused stay mass
//     first, then the unused splits of b + c in increasing r.
// After meeting, both coordinates make the same move.
//
// Two independent constructions live here: coupled_joint() builds the joint
// law clause by clause with explicit bookkeeping of what tau has already
// spent, and CouplingProcess dispatches a single (R, L) position draw with
// closed-form residual masses. Tests hold them equal.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "smlab/errors.hpp"
#include "smlab/exact.hpp"
#include "smlab/part_multiset.hpp"
#include "smlab/partition.hpp"
#include "smlab/rng.hpp"
#include "smlab/split_merge.hpp"

namespace smlab {

/// A neighbor pair in the form sigma = common + {b, c}, tau = common + {b + c}.
struct NeighborSplit {
  std::vector<int> common;
  int b = 0;
  int c = 0;
  bool x_is_sigma = true;
};

inline NeighborSplit split_neighbors(const Partition& x, const Partition& y) {
  if (x.n() != y.n()) throw InvalidInput("partitions of different n");
  const auto d = part_difference(x, y);
  NeighborSplit out;
  const std::vector<int>* two = nullptr;
  if (d.only_first.size() == 2 && d.only_second.size() == 1) {
    two = &d.only_first;
    out.x_is_sigma = true;
  } else if (d.only_second.size() == 2 && d.only_first.size() == 1) {
    two = &d.only_second;
    out.x_is_sigma = false;
  }
  const auto& one = out.x_is_sigma ? d.only_second : d.only_first;
  if (two == nullptr || (*two)[0] + (*two)[1] != one[0])
    throw NotNeighbors("pair " + x.to_string() + ", " + y.to_string() + " is not at distance one");
  out.b = std::min((*two)[0], (*two)[1]);
  out.c = std::max((*two)[0], (*two)[1]);
  const auto& sigma = out.x_is_sigma ? x.parts() : y.parts();
  out.common = sigma;
  out.common.erase(std::find(out.common.begin(), out.common.end(), out.b));
  out.common.erase(std::find(out.common.begin(), out.common.end(), out.c));
  return out;
}

struct JointDistribution {
  std::map<std::pair<Partition, Partition>, Rational> entries;

  Rational total() const {
    Rational t = 0;
    for (const auto& [k, w] : entries) t += w;
    return t;
  }
  Rational diagonal() const {
    Rational t = 0;
    for (const auto& [k, w] : entries)
      if (k.first == k.second) t += w;
    return t;
  }
  SparseDistribution x_marginal() const {
    SparseDistribution d;
    for (const auto& [k, w] : entries) d.entries[k.first] += w;
    return d;
  }
  SparseDistribution y_marginal() const {
    SparseDistribution d;
    for (const auto& [k, w] : entries) d.entries[k.second] += w;
    return d;
  }
};

namespace detail {

inline std::vector<int> with_parts(std::vector<int> base, std::initializer_list<int> remove, std::initializer_list<int> add) {
  for (int v : remove) base.erase(std::find(base.begin(), base.end(), v));
  base.insert(base.end(), add);
  return base;
}

/// Mass (over n^2) of splitting a part of size v into {r, v - r}, r <= v/2.
inline std::int64_t split_mass(int v, int r) {
  if (2 * r < v) return 2 * static_cast<std::int64_t>(v);
  if (2 * r == v) return v;
  return 0;
}

}  // namespace detail

/// Joint law of one coupled step from the neighbor pair (x, y), keyed by
/// (X_1, Y_1) in the caller's orientation.
inline JointDistribution coupled_joint(const Partition& x, const Partition& y) {
  if (x == y) throw NotNeighbors("coupled_joint needs a pair at distance one");
  const auto ns = split_neighbors(x, y);
  const std::int64_t n = x.n();
  const auto& a = ns.common;
  const int b = ns.b, c = ns.c, bc = b + c;
  using detail::with_parts;

  std::map<std::pair<Partition, Partition>, std::int64_t> mass;
  auto emit = [&](std::vector<int> sigma_parts, std::vector<int> tau_parts, std::int64_t w) {
    if (w == 0) return;
    Partition s(std::move(sigma_parts)), t(std::move(tau_parts));
    auto key = ns.x_is_sigma ? std::pair{s, t} : std::pair{t, s};
    mass[key] += w;
  };
  const auto sigma = with_parts(a, {}, {b, c});
  const auto tau = with_parts(a, {}, {bc});

  // shared parts move identically
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int v = a[i];
    for (int r = 1; 2 * r <= v; ++r) {
      const auto rest = with_parts(a, {v}, {r, v - r});
      emit(with_parts(rest, {}, {b, c}), with_parts(rest, {}, {bc}), detail::split_mass(v, r));
    }
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const auto rest = with_parts(a, {v, a[j]}, {v + a[j]});
      emit(with_parts(rest, {}, {b, c}), with_parts(rest, {}, {bc}), 2 * static_cast<std::int64_t>(v) * a[j]);
    }
  }
  // b or c merging with a shared part
  for (int v : a) {
    const auto rest = with_parts(a, {v}, {});
    emit(with_parts(rest, {}, {b + v, c}), with_parts(rest, {}, {bc + v}), 2 * static_cast<std::int64_t>(b) * v);
    emit(with_parts(rest, {}, {b, c + v}), with_parts(rest, {}, {bc + v}), 2 * static_cast<std::int64_t>(c) * v);
  }

  // tau's splits of b + c and how much of each is already paired
  std::vector<std::int64_t> tau_split(static_cast<std::size_t>(bc / 2) + 1, 0), used(tau_split.size(), 0);
  for (int r = 1; 2 * r <= bc; ++r) tau_split[static_cast<std::size_t>(r)] = detail::split_mass(bc, r);

  for (int r = 1; 2 * r <= b; ++r) {
    const std::int64_t w = detail::split_mass(b, r);
    emit(with_parts(a, {}, {r, b - r, c}), with_parts(a, {}, {r, bc - r}), w);
    used[static_cast<std::size_t>(r)] += w;
  }
  for (int r = 1; 2 * r <= c; ++r) {
    const std::int64_t w = detail::split_mass(c, r);
    emit(with_parts(a, {}, {b, r, c - r}), with_parts(a, {}, {r, bc - r}), w);
    used[static_cast<std::size_t>(r)] += w;
  }
  for (std::size_t r = 1; r < tau_split.size(); ++r)
    if (used[r] > tau_split[r]) throw std::logic_error("tau split over-committed");

  // staying in sigma
  const std::int64_t p = tau_split[static_cast<std::size_t>(b)] - used[static_cast<std::size_t>(b)];
  const std::int64_t meet = std::min(p, n);
  emit(sigma, sigma, meet);
  used[static_cast<std::size_t>(b)] += meet;
  emit(sigma, tau, n - meet);
  const std::int64_t tau_stay_left = n - (n - meet);

  // merging b and c soaks up the rest of tau
  std::int64_t left = 2 * static_cast<std::int64_t>(b) * c;
  const auto merged = with_parts(a, {}, {bc});
  auto take = [&](std::int64_t available) {
    const std::int64_t t = std::min(available, left);
    left -= t;
    return t;
  };
  emit(merged, tau, take(tau_stay_left));
  for (int r = 1; 2 * r <= bc; ++r) {
    const std::int64_t avail = tau_split[static_cast<std::size_t>(r)] - used[static_cast<std::size_t>(r)];
    emit(merged, with_parts(a, {}, {r, bc - r}), take(avail));
  }
  if (left != 0) throw std::logic_error("merge of b and c not fully paired");

  JointDistribution out;
  const std::int64_t n2 = n * n;
  for (const auto& [k, w] : mass) out.entries.emplace(k, Rational(w, n2));
  return out;
}

/// What remains of tau's {b, c} split after the c-split pairing, before the
/// stay clause takes its share (the p of the stay clause).
inline Rational stay_split_residual(const Partition& x, const Partition& y) {
  const auto ns = split_neighbors(x, y);
  const std::int64_t n = x.n();
  const std::int64_t p = detail::split_mass(ns.b + ns.c, ns.b) - detail::split_mass(ns.c, ns.b);
  return Rational(p, n * n);
}

inline Rational meet_probability(const Partition& x, const Partition& y) { return coupled_joint(x, y).diagonal(); }

/// Unused tau mass paired with merging b and c, in closed form. `stay` goes
/// to tau staying (the chains meet); each segment assigns `weight` to every
/// split {r, b + c - r} with r in [lo, hi]. Masses are numerators over n^2.
struct MergeResidual {
  struct Segment {
    int lo;
    int hi;
    std::int64_t weight;
  };
  std::int64_t stay = 0;
  std::vector<Segment> segments;

  std::int64_t total() const {
    std::int64_t t = stay;
    for (const auto& s : segments) t += s.weight * (s.hi - s.lo + 1);
    return t;
  }
};

inline std::int64_t meet_on_stay_mass(int b, int c, std::int64_t n) {
  const std::int64_t p = detail::split_mass(b + c, b) - detail::split_mass(c, b);
  return std::min(p, n);
}

inline MergeResidual merge_residual(int b, int c, std::int64_t n) {
  const int bc = b + c, half = bc / 2;
  MergeResidual out;
  out.stay = meet_on_stay_mass(b, c, n);
  auto residual = [&](int r) {
    std::int64_t w = detail::split_mass(bc, r);
    if (2 * r <= b) w -= detail::split_mass(b, r);
    if (2 * r <= c) w -= detail::split_mass(c, r);
    if (r == b) w -= out.stay;
    return w;
  };
  // the residual only changes where r crosses b/2, c/2, b or (b+c)/2
  std::vector<int> starts{1, b / 2, b / 2 + 1, c / 2, c / 2 + 1, b, b + 1, half};
  std::erase_if(starts, [&](int r) { return r < 1 || r > half; });
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const int lo = starts[i];
    const int hi = i + 1 < starts.size() ? starts[i + 1] - 1 : half;
    const std::int64_t w = residual(lo);
    if (w < 0) throw std::logic_error("negative residual split mass");
    if (w > 0) out.segments.push_back({lo, hi, w});
  }
  return out;
}

/// The coupled pair as a running process. Shared parts live in a
/// PartMultiset, so a step costs O(log n) and n = 10^5 is practical. Once the
/// chains meet, the shared multiset holds the whole partition.
class CouplingProcess {
 public:
  CouplingProcess(const Partition& x, const Partition& y) : n_(x.n()), common_(x.n()) {
    if (x.n() != y.n()) throw InvalidInput("partitions of different n");
    if (x == y) {
      met_ = true;
      for (int v : x.parts()) common_.insert(v);
      return;
    }
    const auto ns = split_neighbors(x, y);
    for (int v : ns.common) common_.insert(v);
    b_ = ns.b;
    c_ = ns.c;
    x_is_sigma_ = ns.x_is_sigma;
  }

  int n() const { return n_; }
  bool met() const { return met_; }
  int b() const { return b_; }
  int c() const { return c_; }
  bool x_is_sigma() const { return x_is_sigma_; }

  /// 2 s(X, Y): 2b before meeting, n after (s = n/2 for equal partitions).
  std::int64_t s_twice() const { return met_ ? n_ : 2 * static_cast<std::int64_t>(b_); }
  /// m(X, Y): c before meeting, n after.
  std::int64_t m() const { return met_ ? n_ : c_; }
  PairStats stats() const { return {Rational(s_twice(), 2), Rational(m())}; }

  /// |V(threshold)| of the X coordinate.
  std::int64_t v_stat_x(double threshold) const {
    std::int64_t v = common_.weight_at_least(threshold);
    if (met_) return v;
    if (x_is_sigma_) {
      if (b_ >= threshold) v += b_;
      if (c_ >= threshold) v += c_;
    } else if (b_ + c_ >= threshold) {
      v += b_ + c_;
    }
    return v;
  }

  Partition x() const { return coordinate(x_is_sigma_); }
  Partition y() const { return coordinate(!x_is_sigma_); }

  void step(Rng& rng) {
    const auto n = static_cast<std::uint64_t>(n_);
    const auto R = static_cast<std::int64_t>(rng.below(n));
    const auto L = static_cast<std::int64_t>(rng.below(n));
    if (R == L) {
      if (!met_ && static_cast<std::int64_t>(rng.below(n)) < meet_on_stay_mass(b_, c_, n_)) meet_sigma();
      return;
    }
    const Spot sR = where(R), sL = where(L);
    if (is_bc_merge(sR, sL)) {
      const auto k = static_cast<std::int64_t>(rng.below(2 * static_cast<std::uint64_t>(b_) * static_cast<std::uint64_t>(c_)));
      merge_bc(k);
      return;
    }
    apply(sR, sL);
  }

  /// Exact one-step law, obtained by pushing every (R, L) draw and every
  /// auxiliary branch through the same case map step() uses.
  std::vector<std::pair<CouplingProcess, Rational>> one_step_law() const {
    const std::int64_t n2 = static_cast<std::int64_t>(n_) * n_;
    std::vector<std::pair<CouplingProcess, Rational>> out;
    if (!met_) {
      const std::int64_t meet = meet_on_stay_mass(b_, c_, n_);
      auto met = *this;
      met.meet_sigma();
      out.emplace_back(met, Rational(meet, n2));
      out.emplace_back(*this, Rational(n_ - meet, n2));
      const auto res = merge_residual(b_, c_, n_);
      auto joined = *this;
      joined.meet_tau();
      out.emplace_back(joined, Rational(res.stay, n2));
      for (const auto& seg : res.segments) {
        for (int r = seg.lo; r <= seg.hi; ++r) {
          auto next = *this;
          next.split_after_bc_merge(r);
          out.emplace_back(next, Rational(seg.weight, n2));
        }
      }
    } else {
      out.emplace_back(*this, Rational(n_, n2));
    }
    for (std::int64_t R = 0; R < n_; ++R) {
      for (std::int64_t L = 0; L < n_; ++L) {
        if (R == L) continue;
        const Spot sR = where(R), sL = where(L);
        if (is_bc_merge(sR, sL)) continue;
        auto next = *this;
        next.apply(sR, sL);
        out.emplace_back(std::move(next), Rational(1, n2));
      }
    }
    return out;
  }

  JointDistribution one_step_joint() const {
    JointDistribution j;
    for (const auto& [proc, w] : one_step_law())
      if (w != 0) j.entries[{proc.x(), proc.y()}] += w;
    return j;
  }

 private:
  enum class Zone { Common, B, C };
  struct Spot {
    Zone zone;
    int value;
    std::int64_t copy;
    int offset;
  };

  // sigma's positions: shared parts first, then b, then c
  Spot where(std::int64_t pos) const {
    const std::int64_t shared = common_.total();
    if (pos < shared) {
      const auto loc = common_.locate(pos);
      return {Zone::Common, loc.value, loc.copy, loc.offset};
    }
    pos -= shared;
    if (pos < b_) return {Zone::B, b_, 0, static_cast<int>(pos)};
    return {Zone::C, c_, 0, static_cast<int>(pos - b_)};
  }

  static bool is_bc_merge(const Spot& u, const Spot& v) {
    return (u.zone == Zone::B && v.zone == Zone::C) || (u.zone == Zone::C && v.zone == Zone::B);
  }

  static int piece(const Spot& from, const Spot& to, int size) {
    const int r = ((to.offset - from.offset) % size + size) % size;
    return std::min(r, size - r);
  }

  void set_pair(int u, int v) {
    b_ = std::min(u, v);
    c_ = std::max(u, v);
  }

  void apply(const Spot& sR, const Spot& sL) {
    if (sR.zone == Zone::Common && sL.zone == Zone::Common) {
      if (sR.value == sL.value && sR.copy == sL.copy) {
        const int r = piece(sR, sL, sR.value);
        common_.erase(sR.value);
        common_.insert(r);
        common_.insert(sR.value - r);
      } else {
        common_.erase(sR.value);
        common_.erase(sL.value);
        common_.insert(sR.value + sL.value);
      }
      return;
    }
    if (sR.zone == Zone::Common || sL.zone == Zone::Common) {
      const Spot& shared = sR.zone == Zone::Common ? sR : sL;
      const Spot& own = sR.zone == Zone::Common ? sL : sR;
      common_.erase(shared.value);
      if (own.zone == Zone::B)
        set_pair(b_ + shared.value, c_);
      else
        set_pair(b_, c_ + shared.value);
      return;
    }
    // both positions inside b, or both inside c
    const int size = sR.zone == Zone::B ? b_ : c_;
    const int r = piece(sR, sL, size);
    common_.insert(r);
    if (sR.zone == Zone::B)
      set_pair(b_ - r, c_);
    else
      set_pair(b_, c_ - r);
  }

  void merge_bc(std::int64_t k) {
    const auto res = merge_residual(b_, c_, n_);
    if (k < res.stay) {
      meet_tau();
      return;
    }
    k -= res.stay;
    for (const auto& seg : res.segments) {
      const std::int64_t span = seg.weight * (seg.hi - seg.lo + 1);
      if (k < span) {
        split_after_bc_merge(seg.lo + static_cast<int>(k / seg.weight));
        return;
      }
      k -= span;
    }
    throw std::logic_error("merge residual draw out of range");
  }

  // sigma stays, tau splits b + c into {b, c}: both become sigma
  void meet_sigma() {
    common_.insert(b_);
    common_.insert(c_);
    met_ = true;
    b_ = c_ = 0;
  }

  // sigma merges b and c, tau stays: both become tau
  void meet_tau() {
    common_.insert(b_ + c_);
    met_ = true;
    b_ = c_ = 0;
  }

  // sigma merges b and c while tau splits b + c into {r, b + c - r}; the
  // coordinate holding two differing parts switches sides
  void split_after_bc_merge(int r) {
    const int bc = b_ + c_;
    x_is_sigma_ = !x_is_sigma_;
    set_pair(r, bc - r);
  }

  Partition coordinate(bool sigma_side) const {
    auto parts = common_.descending();
    if (!met_) {
      if (sigma_side) {
        parts.push_back(b_);
        parts.push_back(c_);
      } else {
        parts.push_back(b_ + c_);
      }
    }
    return Partition(std::move(parts));
  }

  int n_ = 0;
  PartMultiset common_;
  int b_ = 0;
  int c_ = 0;
  bool x_is_sigma_ = true;
  bool met_ = false;
};

/// Coupled state with cached statistics.
struct CoupledPair {
  Partition x;
  Partition y;
  PairStats stats;
  bool met = false;

  static CoupledPair start(const Partition& x, const Partition& y) { return {x, y, pair_stats(x, y), x == y}; }
};

inline CoupledPair coupled_step(const CoupledPair& state, Rng& rng) {
  CouplingProcess proc(state.x, state.y);
  proc.step(rng);
  return {proc.x(), proc.y(), proc.stats(), proc.met()};
}

struct CouplingTrajectory {
  std::vector<double> thresholds;
  std::vector<double> s;                         // s(X_t, Y_t), t = 0..t_max
  std::vector<std::int64_t> m;                   // m(X_t, Y_t)
  std::vector<std::vector<std::int64_t>> v;      // v[k][t] = |V_t(thresholds[k])|
  std::optional<std::int64_t> meet_time;
};

inline CouplingTrajectory run_coupling(const Partition& x0, const Partition& y0, std::int64_t t_max, Rng& rng,
                                       const std::vector<double>& thresholds = {}) {
  if (t_max < 0) throw InvalidInput("t_max must be nonnegative");
  CouplingProcess proc(x0, y0);
  CouplingTrajectory tr;
  tr.thresholds = thresholds;
  tr.v.resize(thresholds.size());
  auto record = [&](std::int64_t t) {
    tr.s.push_back(static_cast<double>(proc.s_twice()) / 2);
    tr.m.push_back(proc.m());
    for (std::size_t k = 0; k < thresholds.size(); ++k) tr.v[k].push_back(proc.v_stat_x(thresholds[k]));
    if (proc.met() && !tr.meet_time) tr.meet_time = t;
  };
  record(0);
  for (std::int64_t t = 1; t <= t_max; ++t) {
    proc.step(rng);
    record(t);
  }
  return tr;
}

}  // namespace smlab
