#pragma once

// Exhaustive exact checks of the one-step shrink/growth bounds.
//
//   cycle-shrink  E #{v : |C_1(v)| < |C_0(v)|, |C_1(v)| < x} <= x^2 / n
//   m-shrink      x <= c                    =>  P{m_1 < x}      <= 2 x^2 / n^2
//   m-growth      x <= c, |V_0(y)| >= R     =>  P{m_1 >= x + y} >= 2c (R - 2c) / n^2
//   s-shrink      x <= b                    =>  P{s_1 < x}      <= 4 x^2 / n^2
//   s-growth      x <= b < x + y <= c,
//                 |V_0(y)| >= R             =>  P{s_1 >= x + y} >= 2b (R - 3x - 3y) / n^2
//
// (b, c) = (s, m) of the starting pair and V_0 is measured on the first
// coordinate. Everything is compared as exact rationals.

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "smlab/coupling.hpp"
#include "smlab/errors.hpp"
#include "smlab/exact.hpp"
#include "smlab/partition.hpp"
#include "smlab/transposition_walk.hpp"

namespace smlab {

inline constexpr int kMaxLemmaGridN = 14;

inline const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids{"cycle-shrink", "m-shrink", "m-growth", "s-shrink", "s-growth"};
  return ids;
}

struct LemmaReport {
  std::string lemma;
  int n = 0;
  std::string input;
  Rational lhs = 0;
  Rational rhs = 0;
  bool holds = true;
  bool skipped = false;
  bool vacuous = false;  // lower bound <= 0
};

namespace detail {

inline std::string describe(const Partition& x, const Partition& y, std::initializer_list<std::pair<const char*, std::int64_t>> args) {
  std::ostringstream os;
  os << x.to_string() << '|' << y.to_string();
  for (const auto& [k, v] : args) os << ' ' << k << '=' << v;
  return os.str();
}

inline LemmaReport skipped(const char* lemma, const Partition& x, const Partition& y, std::string input) {
  LemmaReport r;
  r.lemma = lemma;
  r.n = x.n();
  r.input = std::move(input);
  r.skipped = true;
  (void)y;
  return r;
}

// Law of (2 s_1, m_1) after one coupled step, as numerators over n^2 keyed by
// (2s, m) so that half-integers stay integral.
using StatLaw = std::map<std::pair<std::int64_t, std::int64_t>, Rational>;

inline StatLaw stat_law_from_joint(const JointDistribution& j) {
  StatLaw out;
  for (const auto& [k, w] : j.entries) {
    const auto st = pair_stats(k.first, k.second);
    out[{static_cast<std::int64_t>(numerator(Rational(2 * st.s))), static_cast<std::int64_t>(numerator(st.m))}] += w;
  }
  return out;
}

inline StatLaw stat_law_from_process(const Partition& x, const Partition& y) {
  StatLaw out;
  for (const auto& [proc, w] : CouplingProcess(x, y).one_step_law())
    if (w != 0) out[{proc.s_twice(), proc.m()}] += w;
  return out;
}

template <class Pred>
Rational mass_where(const StatLaw& law, Pred pred) {
  Rational t = 0;
  for (const auto& [k, w] : law)
    if (pred(k.first, k.second)) t += w;
  return t;
}

// precondition: x, y neighbors with the given (b, c)
struct PairContext {
  bool ok = false;
  std::int64_t b = 0;
  std::int64_t c = 0;
  StatLaw law;
};

inline PairContext pair_context(const Partition& x, const Partition& y) {
  if (x.n() != y.n()) throw InvalidInput("partitions of different n");
  PairContext ctx;
  if (x == y || !merge_difference(x, y)) return ctx;
  const auto bc = *merge_difference(x, y);
  ctx.ok = true;
  ctx.b = bc.first;
  ctx.c = bc.second;
  ctx.law = stat_law_from_joint(coupled_joint(x, y));
  return ctx;
}

inline Rational over_n2(std::int64_t num, int n) { return Rational(num, static_cast<std::int64_t>(n) * n); }

inline LemmaReport m_shrink(const Partition& x, const Partition& y, const PairContext& ctx, std::int64_t xv) {
  const auto input = describe(x, y, {{"x", xv}});
  if (!ctx.ok || xv < 1 || xv > ctx.c) return skipped("m-shrink", x, y, input);
  LemmaReport r{"m-shrink", x.n(), input};
  r.lhs = mass_where(ctx.law, [&](std::int64_t, std::int64_t m) { return m < xv; });
  r.rhs = over_n2(2 * xv * xv, x.n());
  r.holds = r.lhs <= r.rhs;
  return r;
}

inline LemmaReport m_growth(const Partition& x, const Partition& y, const PairContext& ctx, std::int64_t xv, std::int64_t yv,
                            std::int64_t R) {
  const auto input = describe(x, y, {{"x", xv}, {"y", yv}, {"R", R}});
  if (!ctx.ok || xv < 1 || yv < 1 || xv > ctx.c || v_stat(x, static_cast<double>(yv)) < R) return skipped("m-growth", x, y, input);
  LemmaReport r{"m-growth", x.n(), input};
  r.lhs = mass_where(ctx.law, [&](std::int64_t, std::int64_t m) { return m >= xv + yv; });
  r.rhs = over_n2(2 * ctx.c * (R - 2 * ctx.c), x.n());
  r.vacuous = r.rhs <= 0;
  r.holds = r.lhs >= r.rhs;
  return r;
}

inline LemmaReport s_shrink(const Partition& x, const Partition& y, const PairContext& ctx, std::int64_t xv) {
  const auto input = describe(x, y, {{"x", xv}});
  if (!ctx.ok || xv < 1 || xv > ctx.b) return skipped("s-shrink", x, y, input);
  LemmaReport r{"s-shrink", x.n(), input};
  r.lhs = mass_where(ctx.law, [&](std::int64_t s2, std::int64_t) { return s2 < 2 * xv; });
  r.rhs = over_n2(4 * xv * xv, x.n());
  r.holds = r.lhs <= r.rhs;
  return r;
}

inline LemmaReport s_growth(const Partition& x, const Partition& y, const PairContext& ctx, std::int64_t xv, std::int64_t yv,
                            std::int64_t R) {
  const auto input = describe(x, y, {{"x", xv}, {"y", yv}, {"R", R}});
  if (!ctx.ok || xv < 1 || yv < 1 || xv > ctx.b || ctx.b >= xv + yv || xv + yv > ctx.c ||
      v_stat(x, static_cast<double>(yv)) < R)
    return skipped("s-growth", x, y, input);
  LemmaReport r{"s-growth", x.n(), input};
  r.lhs = mass_where(ctx.law, [&](std::int64_t s2, std::int64_t) { return s2 >= 2 * (xv + yv); });
  r.rhs = over_n2(2 * ctx.b * (R - 3 * xv - 3 * yv), x.n());
  r.vacuous = r.rhs <= 0;
  r.holds = r.lhs >= r.rhs;
  return r;
}

}  // namespace detail

/// Exact expected count for the cycle-shrink bound, from the ordered split
/// probabilities a_i / n^2.
inline Rational cycle_shrink_expectation(const Partition& p, std::int64_t x) {
  std::int64_t num = 0;
  for (int a : p.parts())
    for (int r = 1; r < a; ++r) num += static_cast<std::int64_t>(a) * ((r < x ? r : 0) + (a - r < x ? a - r : 0));
  return detail::over_n2(num, p.n());
}

/// Same expectation by applying all n^2 transpositions to a permutation of
/// cycle type p and counting labels directly. Returns the value for every
/// x = 1..n + 1 (index x).
inline std::vector<Rational> cycle_shrink_by_enumeration(const Partition& p) {
  const int n = p.n();
  std::vector<int> mapping(static_cast<std::size_t>(n));
  int start = 0;
  for (int a : p.parts()) {
    for (int k = 0; k < a; ++k) mapping[static_cast<std::size_t>(start + k)] = start + (k + 1) % a + 1;
    start += a;
  }
  const auto perm = CyclePermutation::from_mapping(mapping);
  std::vector<std::int64_t> hist(static_cast<std::size_t>(n) + 1, 0);  // hist[c]: labels whose new cycle has size c < old
  for (int u = 1; u <= n; ++u)
    for (int v = 1; v <= n; ++v) {
      const auto next = apply_transposition(perm, u, v);
      for (int w = 1; w <= n; ++w) {
        const int after = next.cycle_size_of(w);
        if (after < perm.cycle_size_of(w)) ++hist[static_cast<std::size_t>(after)];
      }
    }
  std::vector<Rational> out(static_cast<std::size_t>(n) + 2, 0);
  std::int64_t cum = 0;
  for (int x = 1; x <= n + 1; ++x) {
    cum += hist[static_cast<std::size_t>(x - 1)];
    out[static_cast<std::size_t>(x)] = detail::over_n2(cum, n);
  }
  return out;
}

inline LemmaReport verify_cycle_shrink(const Partition& p, std::int64_t x) {
  LemmaReport r{"cycle-shrink", p.n(), p.to_string() + " x=" + std::to_string(x)};
  if (x < 1) {
    r.skipped = true;
    return r;
  }
  r.lhs = cycle_shrink_expectation(p, x);
  r.rhs = Rational(x * x, p.n());
  r.holds = r.lhs <= r.rhs;
  return r;
}

inline LemmaReport verify_m_shrink(const Partition& x_part, const Partition& y_part, std::int64_t x) {
  return detail::m_shrink(x_part, y_part, detail::pair_context(x_part, y_part), x);
}

inline LemmaReport verify_m_growth(const Partition& x_part, const Partition& y_part, std::int64_t x, std::int64_t y, std::int64_t R) {
  return detail::m_growth(x_part, y_part, detail::pair_context(x_part, y_part), x, y, R);
}

inline LemmaReport verify_s_shrink(const Partition& x_part, const Partition& y_part, std::int64_t x) {
  return detail::s_shrink(x_part, y_part, detail::pair_context(x_part, y_part), x);
}

inline LemmaReport verify_s_growth(const Partition& x_part, const Partition& y_part, std::int64_t x, std::int64_t y, std::int64_t R) {
  return detail::s_growth(x_part, y_part, detail::pair_context(x_part, y_part), x, y, R);
}

struct LemmaCounts {
  std::int64_t checked = 0;
  std::int64_t vacuous = 0;
  std::int64_t violations = 0;
};

struct GridResult {
  int n_max = 0;
  std::vector<LemmaReport> violations;
  std::map<std::string, LemmaCounts> counts;
  std::int64_t pairs = 0;
  std::int64_t cross_check_mismatches = 0;  // the two lhs routes disagree

  std::int64_t total_violations() const {
    std::int64_t t = 0;
    for (const auto& [k, c] : counts) t += c.violations;
    return t;
  }
};

/// Every admissible input for n = 2..n_max: all partitions and x = 1..n for
/// the cycle bound; all ordered neighbor pairs with every admissible x, y and
/// R = |V_0(y)| for the pair bounds.
inline GridResult run_grid(int n_max) {
  if (n_max > kMaxLemmaGridN) throw ResourceGuard("lemma grid limited to n <= 14");
  GridResult g;
  g.n_max = n_max;
  for (const auto& id : lemma_ids()) g.counts[id];
  auto record = [&](LemmaReport r) {
    if (r.skipped) return;
    auto& c = g.counts[r.lemma];
    ++c.checked;
    c.vacuous += r.vacuous;
    if (!r.holds) {
      ++c.violations;
      g.violations.push_back(std::move(r));
    }
  };
  for (int n = 2; n <= n_max; ++n) {
    for (const auto& p : all_partitions(n)) {
      const auto enumerated = cycle_shrink_by_enumeration(p);
      for (std::int64_t x = 1; x <= n; ++x) {
        auto r = verify_cycle_shrink(p, x);
        if (r.lhs != enumerated[static_cast<std::size_t>(x)]) ++g.cross_check_mismatches;
        record(std::move(r));
      }
      for (const auto& q : neighbors(p)) {
        ++g.pairs;
        const auto ctx = detail::pair_context(p, q);
        if (ctx.law != detail::stat_law_from_process(p, q)) ++g.cross_check_mismatches;
        for (std::int64_t x = 1; x <= ctx.c; ++x) {
          record(detail::m_shrink(p, q, ctx, x));
          for (std::int64_t y = 1; y <= n; ++y) record(detail::m_growth(p, q, ctx, x, y, v_stat(p, static_cast<double>(y))));
        }
        for (std::int64_t x = 1; x <= ctx.b; ++x) {
          record(detail::s_shrink(p, q, ctx, x));
          for (std::int64_t y = ctx.b - x + 1; x + y <= ctx.c; ++y)
            record(detail::s_growth(p, q, ctx, x, y, v_stat(p, static_cast<double>(y))));
        }
      }
    }
  }
  return g;
}

}  // namespace smlab
