#pragma once

// Monte Carlo side: Poisson-Dirichlet(1) samples, the random-graph giant
// component, cycle sizes of the transposition walk against PD(1), the growth
// of s under the coupling, the K / a_r / tau_r schedule, and a Monte Carlo
// distance-to-stationarity estimate for moderate n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "smlab/coupling.hpp"
#include "smlab/errors.hpp"
#include "smlab/parallel.hpp"
#include "smlab/partition.hpp"
#include "smlab/rng.hpp"
#include "smlab/split_merge.hpp"
#include "smlab/transposition_walk.hpp"

namespace smlab {

/// E[largest PD(1) coordinate], the Golomb-Dickman constant.
inline constexpr double kGolombDickman = 0.62432998854355087;

struct MeanEstimate {
  double mean = 0;
  double se = 0;
  std::int64_t samples = 0;
};

namespace detail {

inline MeanEstimate summarize(const std::vector<double>& xs) {
  MeanEstimate m;
  m.samples = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return m;
}

// blocks of contiguous trial indices; sums over blocks are exact integers so
// the grouping does not affect the result
template <class Fn>
void trial_blocks(std::int64_t trials, int threads, Fn fn) {
  const std::int64_t blocks = std::max(1, threads);
  parallel_trials(blocks, threads, [&](std::int64_t b) { fn(b, trials * b / blocks, trials * (b + 1) / blocks); });
}

}  // namespace detail

// ---------------------------------------------------------------- PD(1)

struct PD1Sample {
  std::vector<double> top;  // k largest coordinates, non-increasing
  int k = 0;
  double hidden_max = 0;  // bound on every coordinate not in `top`
};

/// Uniform stick-breaking x_j = U_j (1 - x_1 - ... - x_{j-1}), stopped when
/// the remaining stick drops below 1e-15 or after 4k sticks.
inline PD1Sample pd1_sample(Rng& rng, int k) {
  if (k < 1) throw InvalidInput("k must be positive");
  std::vector<double> sticks;
  double rest = 1;
  while (rest >= 1e-15 && static_cast<int>(sticks.size()) < 4 * k) {
    const double x = rng.uniform01() * rest;
    sticks.push_back(x);
    rest -= x;
  }
  std::sort(sticks.begin(), sticks.end(), std::greater<>());
  PD1Sample s;
  s.k = k;
  s.hidden_max = rest;
  if (static_cast<int>(sticks.size()) > k) {
    s.hidden_max = std::max(s.hidden_max, sticks[static_cast<std::size_t>(k)]);
    sticks.resize(static_cast<std::size_t>(k));
  }
  s.top = std::move(sticks);
  return s;
}

struct GValue {
  double value = 0;
  bool approximate = false;  // coordinates beyond the truncation might reach x
};

/// G(x) = sum of coordinates >= x.
inline GValue g_statistic(const PD1Sample& s, double x) {
  if (!(x > 0 && x < 1)) throw InvalidInput("x must lie in (0, 1)");
  GValue g;
  for (double y : s.top)
    if (y >= x) g.value += y;
  g.approximate = s.hidden_max >= x;
  return g;
}

/// Monte Carlo E[G(x)]; sample i uses stream derive_seed(seed, i).
inline MeanEstimate pd1_g_mean(double x, std::int64_t samples, std::uint64_t seed, int k = 32, int threads = 1) {
  std::vector<double> vals(static_cast<std::size_t>(samples));
  parallel_trials(samples, threads, [&](std::int64_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    vals[static_cast<std::size_t>(i)] = g_statistic(pd1_sample(rng, k), x).value;
  });
  return detail::summarize(vals);
}

// ----------------------------------------------------------- giant component

/// Positive root of 1 - z = exp(-z s), s > 1, by bisection.
inline double z_solver(double s) {
  if (!(s > 1)) throw InvalidInput("1 - z = exp(-zs) has no positive root for s <= 1");
  // f(z) = 1 - z - exp(-zs) via expm1 to keep precision near z = 0
  auto f = [s](double z) { return -z - std::expm1(-z * s); };
  double lo = std::min(0.5, (s - 1) / (s * s)), hi = 1;
  while (f(lo) <= 0 && lo > 1e-300) lo /= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = (lo + hi) / 2;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

/// |W_t| / n at t = round(c n), averaged over independent graphs.
inline MeanEstimate giant_fraction(int n, double c, std::int64_t trials, std::uint64_t seed, int threads = 1) {
  const auto t = static_cast<std::int64_t>(std::llround(c * n));
  std::vector<double> vals(static_cast<std::size_t>(trials));
  parallel_trials(trials, threads, [&](std::int64_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    vals[static_cast<std::size_t>(i)] = static_cast<double>(graph_track(n, t, rng).back()) / n;
  });
  return detail::summarize(vals);
}

// ------------------------------------------------------- walk against PD(1)

/// Two-sample Kolmogorov-Smirnov distance.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidInput("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double best = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / static_cast<double>(a.size()) -
                                    static_cast<double>(j) / static_cast<double>(b.size())));
  }
  return best;
}

struct PD1Comparison {
  int n = 0;
  std::int64_t t = 0;
  std::int64_t trials = 0;
  int k = 0;
  std::vector<double> ks;  // per coordinate
  std::vector<MeanEstimate> walk;
  std::vector<MeanEstimate> reference;
  MeanEstimate giant;
};

/// Runs the walk for t steps from the identity, scales the k largest cycles
/// by the giant component of the same transpositions, and compares each
/// coordinate with a PD(1) reference sample. Trial i uses
/// derive_seed(seed, i); reference sample j uses derive_seed(seed ^ 1, j).
inline PD1Comparison pd1_comparison(int n, std::int64_t t, std::int64_t trials, int k, std::uint64_t seed,
                                    std::int64_t reference_samples = 100000, int threads = 1) {
  if (n < 1 || t < 0 || trials < 1 || k < 1) throw InvalidInput("bad pd1_comparison parameters");
  const auto uk = static_cast<std::size_t>(k);
  std::vector<std::vector<double>> walk(uk, std::vector<double>(static_cast<std::size_t>(trials), 0));
  std::vector<double> giant(static_cast<std::size_t>(trials));
  parallel_trials(trials, threads, [&](std::int64_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    CyclePermutation perm(n);
    GraphState graph(n);
    for (std::int64_t s = 0; s < t; ++s) {
      const auto [u, v] = draw_transposition(n, rng);
      perm.transpose(u, v);
      graph.add_edge(u, v);
    }
    auto sizes = perm.cycle_sizes();
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    const double w = graph.largest();
    for (std::size_t c = 0; c < uk && c < sizes.size(); ++c) walk[c][static_cast<std::size_t>(i)] = sizes[c] / w;
    giant[static_cast<std::size_t>(i)] = w / n;
  });
  std::vector<std::vector<double>> ref(uk, std::vector<double>(static_cast<std::size_t>(reference_samples), 0));
  parallel_trials(reference_samples, threads, [&](std::int64_t j) {
    Rng rng(derive_seed(seed ^ 1, static_cast<std::uint64_t>(j)));
    const auto s = pd1_sample(rng, k);
    for (std::size_t c = 0; c < s.top.size(); ++c) ref[c][static_cast<std::size_t>(j)] = s.top[c];
  });
  PD1Comparison out;
  out.n = n;
  out.t = t;
  out.trials = trials;
  out.k = k;
  out.giant = detail::summarize(giant);
  for (std::size_t c = 0; c < uk; ++c) {
    out.ks.push_back(ks_distance(walk[c], ref[c]));
    out.walk.push_back(detail::summarize(walk[c]));
    out.reference.push_back(detail::summarize(ref[c]));
  }
  return out;
}

// ------------------------------------------------------------ the schedule

struct GrowthSchedule {
  std::int64_t n = 0;
  int j = 0;
  double epsilon = 0;
  double delta = 0;
  int K = 0;
  std::vector<std::int64_t> a;    // a[r - j] for r = j..K-1
  std::vector<std::int64_t> tau;  // tau[r - j] for r = j..K

  std::int64_t a_at(int r) const { return a.at(static_cast<std::size_t>(r - j)); }
  std::int64_t tau_at(int r) const { return tau.at(static_cast<std::size_t>(r - j)); }
  std::int64_t tau_K() const { return tau.back(); }
  /// n^(2/3) log2 n, the order of tau_K when 2^(j+1) = n^(1/3).
  double magnitude() const { return std::pow(static_cast<double>(n), 2.0 / 3.0) * std::log2(static_cast<double>(n)); }
};

/// Largest j with 2^(j+1) <= n^(1/3), i.e. 2^(3(j+1)) <= n.
inline int default_j(std::int64_t n) {
  if (n < 8) throw InvalidInput("n must be at least 8");
  int j = 0;
  while (3 * (j + 2) < 63 && (std::int64_t{1} << (3 * (j + 2))) <= n) ++j;
  return j;
}

/// ceil(log2(x)) for x > 0, exact for every double.
inline int ceil_log2(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m 2^e, m in [0.5, 1)
  return m == 0.5 ? e - 1 : e;
}

inline GrowthSchedule make_schedule(std::int64_t n, int j, double epsilon, double delta) {
  if (!(epsilon > 0 && epsilon < 1.0 / 32)) throw InvalidInput("epsilon must lie in (0, 1/32)");
  if (!(delta > 0 && delta <= 1)) throw InvalidInput("delta must lie in (0, 1]");
  if (j < 0 || j > 61 || (std::int64_t{1} << (j + 1)) > n) throw InvalidInput("need 2^(j+1) <= n");
  GrowthSchedule g;
  g.n = n;
  g.j = j;
  g.epsilon = epsilon;
  g.delta = delta;
  g.K = ceil_log2(epsilon * delta * static_cast<double>(n));
  if (g.K <= j) throw InvalidInput("epsilon * delta * n must exceed 2^j");
  const double log2n = std::log2(static_cast<double>(n));
  g.tau.push_back(0);
  for (int r = j; r < g.K; ++r) {
    const double v = 2 / delta * std::ldexp(static_cast<double>(n), -r) * (log2n - r);
    g.a.push_back(static_cast<std::int64_t>(std::ceil(v)));
    g.tau.push_back(g.tau.back() + g.a.back());
  }
  return g;
}

// ------------------------------------------------------------ growth of s

inline std::pair<Partition, Partition> default_start(int n) {
  if (n < 2) throw InvalidInput("n must be at least 2");
  std::vector<int> y(static_cast<std::size_t>(n - 1), 1);
  y[0] = 2;
  return {Partition::ones(n), Partition(y)};
}

struct STrajectory {
  int n = 0;
  std::int64_t trials = 0;
  std::vector<std::int64_t> t;
  std::vector<double> mean_s;
  std::vector<double> se_s;
  std::vector<double> meet_fraction;
};

/// Mean of s(X_t, Y_t) (n/2 once met) at t = 0, stride, 2 stride, ... and
/// t_max. Trial i uses derive_seed(seed, i).
inline STrajectory expected_s_trajectory(const Partition& x0, const Partition& y0, std::int64_t t_max, std::int64_t trials,
                                         std::uint64_t seed, std::int64_t stride = 1, int threads = 1) {
  if (t_max < 0 || trials < 1 || stride < 1) throw InvalidInput("bad trajectory parameters");
  std::vector<std::int64_t> times;
  for (std::int64_t t = 0; t <= t_max; t += stride) times.push_back(t);
  if (times.back() != t_max) times.push_back(t_max);
  const std::size_t m = times.size();
  const int blocks = std::max(1, threads);
  // integer sums of 2s, (2s)^2 and met counts per block
  std::vector<std::vector<std::int64_t>> sum(static_cast<std::size_t>(blocks), std::vector<std::int64_t>(m, 0));
  auto sq = sum, met = sum;
  detail::trial_blocks(trials, threads, [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
    auto& S = sum[static_cast<std::size_t>(b)];
    auto& Q = sq[static_cast<std::size_t>(b)];
    auto& M = met[static_cast<std::size_t>(b)];
    for (std::int64_t i = lo; i < hi; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      CouplingProcess proc(x0, y0);
      std::int64_t now = 0;
      for (std::size_t k = 0; k < m; ++k) {
        for (; now < times[k]; ++now) proc.step(rng);
        const std::int64_t s2 = proc.s_twice();
        S[k] += s2;
        Q[k] += s2 * s2;
        M[k] += proc.met();
      }
    }
  });
  STrajectory out;
  out.n = x0.n();
  out.trials = trials;
  out.t = times;
  const auto T = static_cast<double>(trials);
  for (std::size_t k = 0; k < m; ++k) {
    std::int64_t S = 0, Q = 0, M = 0;
    for (int b = 0; b < blocks; ++b) {
      S += sum[static_cast<std::size_t>(b)][k];
      Q += sq[static_cast<std::size_t>(b)][k];
      M += met[static_cast<std::size_t>(b)][k];
    }
    const double mean2 = static_cast<double>(S) / T;
    const double var2 = trials > 1 ? std::max(0.0, (static_cast<double>(Q) - T * mean2 * mean2) / (T - 1)) : 0.0;
    out.mean_s.push_back(mean2 / 2);
    out.se_s.push_back(std::sqrt(var2 / T) / 2);
    out.meet_fraction.push_back(static_cast<double>(M) / T);
  }
  return out;
}

// ------------------------------------------------------ proportion checks

struct ProportionEstimate {
  std::int64_t t = 0;
  std::int64_t hits = 0;
  std::int64_t trials = 0;
  double p = 0;
  double lo = 0;  // Wilson score interval
  double hi = 1;
};

inline ProportionEstimate wilson(std::int64_t hits, std::int64_t trials, double z = 1.96) {
  ProportionEstimate e;
  e.hits = hits;
  e.trials = trials;
  if (trials == 0) return e;
  const double n = static_cast<double>(trials);
  e.p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (e.p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(e.p * (1 - e.p) / n + z2 / (4 * n * n));
  e.lo = std::max(0.0, centre - half);
  e.hi = std::min(1.0, centre + half);
  return e;
}

/// s(X, Y) >= x and |V(x)| >= v_min on the X coordinate.
inline bool s_and_v_at_least(const CouplingProcess& proc, double x, double v_min) {
  return static_cast<double>(proc.s_twice()) >= 2 * x && static_cast<double>(proc.v_stat_x(x)) >= v_min;
}

/// P{s(X_t, Y_t) >= n^(1/3), |V_t(n^(1/3))| >= n/2} from the default start,
/// at each requested t (one run per trial covers all of them).
inline std::vector<ProportionEstimate> rootn_check(int n, std::int64_t trials, std::uint64_t seed, std::vector<std::int64_t> times,
                                                   int threads = 1) {
  if (times.empty() || trials < 1) throw InvalidInput("bad rootn_check parameters");
  std::sort(times.begin(), times.end());
  const auto [x0, y0] = default_start(n);
  const double x = std::cbrt(static_cast<double>(n));
  const std::size_t m = times.size();
  std::vector<std::vector<char>> hit(static_cast<std::size_t>(trials), std::vector<char>(m, 0));
  parallel_trials(trials, threads, [&](std::int64_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    CouplingProcess proc(x0, y0);
    std::int64_t now = 0;
    for (std::size_t k = 0; k < m; ++k) {
      for (; now < times[k]; ++now) proc.step(rng);
      hit[static_cast<std::size_t>(i)][k] = s_and_v_at_least(proc, x, n / 2.0);
    }
  });
  std::vector<ProportionEstimate> out;
  for (std::size_t k = 0; k < m; ++k) {
    std::int64_t h = 0;
    for (const auto& row : hit) h += row[k];
    auto e = wilson(h, trials);
    e.t = times[k];
    out.push_back(e);
  }
  return out;
}

struct SbigEstimate {
  GrowthSchedule schedule;
  std::int64_t attempts = 0;
  std::int64_t accepted = 0;
  ProportionEstimate failure;  // among accepted starts
  double shape = 0;            // epsilon |log(epsilon delta)| / delta
};

/// Start pairs come from running the default start for ceil(9n) steps and
/// keeping those with s >= n^(1/3), |V(n^(1/3))| >= n/2, s >= 2^(j+1) and
/// |V(2^(j+1))| >= delta n. Each kept pair runs tau_K more steps; the
/// estimate is the fraction ending with s < epsilon delta n.
inline SbigEstimate sbig_check(int n, int j, double epsilon, double delta, std::int64_t attempts, std::uint64_t seed, int threads = 1) {
  SbigEstimate out;
  out.schedule = make_schedule(n, j, epsilon, delta);
  out.attempts = attempts;
  out.shape = epsilon * std::fabs(std::log(epsilon * delta)) / delta;
  const auto [x0, y0] = default_start(n);
  const double root = std::cbrt(static_cast<double>(n));
  const double base = std::ldexp(1.0, j + 1);
  const double target = epsilon * delta * n;
  const std::int64_t warmup = 9 * static_cast<std::int64_t>(n);
  const std::int64_t tau = out.schedule.tau_K();
  // 0 rejected, 1 accepted and fine, 2 accepted and failed
  std::vector<char> result(static_cast<std::size_t>(attempts), 0);
  parallel_trials(attempts, threads, [&](std::int64_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    CouplingProcess proc(x0, y0);
    for (std::int64_t s = 0; s < warmup; ++s) proc.step(rng);
    if (!s_and_v_at_least(proc, root, n / 2.0) || !s_and_v_at_least(proc, base, delta * n)) return;
    for (std::int64_t s = 0; s < tau; ++s) proc.step(rng);
    result[static_cast<std::size_t>(i)] = static_cast<double>(proc.s_twice()) < 2 * target ? 2 : 1;
  });
  std::int64_t failed = 0;
  for (char r : result) {
    out.accepted += r != 0;
    failed += r == 2;
  }
  out.failure = wilson(failed, out.accepted);
  out.failure.t = warmup + tau;
  return out;
}

// ------------------------------------- fixed points and cycle count vs pi

/// Cells of (fixed points, cycles), with fixed points capped at f_cap and
/// cycles at c_cap (the last index of each holds "at least").
struct FixedCycleCells {
  int f_cap = 5;
  int c_cap = 12;
  int cell(std::int64_t fixed, std::int64_t cycles) const {
    const auto f = static_cast<int>(std::min<std::int64_t>(fixed, f_cap));
    const auto c = static_cast<int>(std::min<std::int64_t>(cycles, c_cap));
    return f * (c_cap + 1) + c;
  }
  int size() const { return (f_cap + 1) * (c_cap + 1); }
};

/// Uniform-permutation law of the cells: P(F = k, C = c) = d(n-k, c-k) / k!,
/// d(m, j) the fraction of permutations of m points that are derangements
/// with j cycles, d(m, j) = (m-1)/m d(m-1, j) + 1/m d(m-2, j-1).
inline std::vector<double> stationary_fixed_cycle_law(int n, const FixedCycleCells& cells) {
  if (n < 1) throw InvalidInput("n must be positive");
  const auto N = static_cast<std::size_t>(n) + 1;
  std::vector<std::vector<long double>> d(N, std::vector<long double>(N, 0.0L));
  d[0][0] = 1;
  for (std::size_t m = 2; m < N; ++m)
    for (std::size_t j = 1; j <= m / 2; ++j)
      d[m][j] = (static_cast<long double>(m) - 1) / m * d[m - 1][j] + d[m - 2][j - 1] / m;
  std::vector<double> law(static_cast<std::size_t>(cells.size()), 0);
  long double inv_fact = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) inv_fact /= k;
    const auto m = static_cast<std::size_t>(n - k);
    for (std::size_t j = 0; j <= m; ++j)
      if (d[m][j] != 0) law[static_cast<std::size_t>(cells.cell(k, k + static_cast<std::int64_t>(j)))] += static_cast<double>(d[m][j] * inv_fact);
  }
  return law;
}

struct DistanceEstimate {
  std::int64_t t = 0;
  double value = 0;
  double se = 0;
};

/// Monte Carlo total variation between the cell law of X_t (from (1^n)) and
/// its stationary law. This is a lower bound on d(t) up to sampling noise.
/// The standard error is the delta-method value for sum |p_i - pi_i| / 2.
inline std::vector<DistanceEstimate> mc_distance_curve(int n, std::vector<std::int64_t> times, std::int64_t trials,
                                                       std::uint64_t seed, int threads = 1, FixedCycleCells cells = {}) {
  if (times.empty() || trials < 1) throw InvalidInput("bad distance parameters");
  std::sort(times.begin(), times.end());
  const auto law = stationary_fixed_cycle_law(n, cells);
  const std::size_t m = times.size();
  std::vector<std::vector<int>> cell_of(static_cast<std::size_t>(trials), std::vector<int>(m));
  parallel_trials(trials, threads, [&](std::int64_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    SplitMergeProcess chain(Partition::ones(n));
    std::int64_t now = 0;
    for (std::size_t k = 0; k < m; ++k) {
      for (; now < times[k]; ++now) chain.step(rng);
      cell_of[static_cast<std::size_t>(i)][k] = cells.cell(chain.parts().count(1), chain.parts().parts());
    }
  });
  std::vector<DistanceEstimate> out;
  const auto T = static_cast<double>(trials);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<double> p(law.size(), 0);
    for (const auto& row : cell_of) p[static_cast<std::size_t>(row[k])] += 1 / T;
    double tv = 0, mean_sign = 0, mean_sign2 = 0;
    for (std::size_t c = 0; c < law.size(); ++c) {
      tv += std::fabs(p[c] - law[c]) / 2;
      const double sign = p[c] > law[c] ? 1 : (p[c] < law[c] ? -1 : 0);
      mean_sign += sign * p[c];
      mean_sign2 += sign * sign * p[c];
    }
    const double var = std::max(0.0, mean_sign2 - mean_sign * mean_sign);
    out.push_back({times[k], tv, 0.5 * std::sqrt(var / T)});
  }
  return out;
}

}  // namespace smlab
