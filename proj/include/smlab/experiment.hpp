#pragma once

// Experiment records and the five subcommands behind the smlab CLI.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "smlab/coupling.hpp"
#include "smlab/lemma_oracles.hpp"
#include "smlab/schramm_stats.hpp"
#include "smlab/split_merge.hpp"
#include "smlab/transposition_walk.hpp"

namespace smlab {

struct ExperimentConfig {
  std::string command;
  std::vector<int> n_grid;
  std::optional<std::int64_t> t_max;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_max;
  std::optional<int> j;
  std::optional<std::int64_t> stride;
  double eps = 0.25;  // tau_mix(eps) for exact-tv; epsilon of the schedule for schramm
  bool eps_set = false;
  double delta = 0.5;
  int k = 3;
  int threads = 1;
  std::string format = "csv";
  std::string out;
  bool record_wall_time = false;
};

using RecordValue = std::variant<std::int64_t, double, std::string>;

struct ExperimentRecord {
  std::string experiment_id;
  std::int64_t n = 0;
  std::optional<std::int64_t> t;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::string statistic;
  RecordValue value;
  std::optional<double> stderr_value;
  std::optional<std::uint64_t> seed;
  std::optional<double> wall_ms;
};

struct CommandResult {
  std::vector<ExperimentRecord> records;
  std::int64_t violations = 0;
  int exit_code() const { return violations > 0 ? 1 : 0; }
};

/// Raised for configurations a subcommand cannot run (exit code 2).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::int64_t kViolationRowLimit = 10000;

inline const char* kSeedDerivation =
    "# seed-derivation: trial i of experiment k draws from mt19937_64 seeded with "
    "splitmix64(m_k + (i+1)*0x9E3779B97F4A7C15), m_k = splitmix64(seed + (k+1)*0x9E3779B97F4A7C15)";

// ------------------------------------------------------------------ output

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_value(const RecordValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return std::get<std::string>(v);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& rows) {
  os << kSeedDerivation << '\n';
  os << "experiment_id,n,t,param_json,statistic,value,stderr,seed,wall_ms\n";
  for (const auto& r : rows) {
    os << csv_field(r.experiment_id) << ',' << r.n << ',' << (r.t ? std::to_string(*r.t) : "") << ','
       << csv_field(r.params.dump()) << ',' << csv_field(r.statistic) << ',' << csv_field(format_value(r.value)) << ','
       << (r.stderr_value ? format_double(*r.stderr_value) : "") << ',' << (r.seed ? std::to_string(*r.seed) : "") << ','
       << (r.wall_ms ? format_double(*r.wall_ms) : "") << '\n';
  }
}

inline void write_json(std::ostream& os, const std::vector<ExperimentRecord>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["experiment_id"] = r.experiment_id;
    o["n"] = r.n;
    o["t"] = r.t ? nlohmann::ordered_json(*r.t) : nlohmann::ordered_json();
    o["param_json"] = r.params;
    o["statistic"] = r.statistic;
    std::visit([&](const auto& v) { o["value"] = v; }, r.value);
    o["stderr"] = r.stderr_value ? nlohmann::ordered_json(*r.stderr_value) : nlohmann::ordered_json();
    o["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json();
    o["wall_ms"] = r.wall_ms ? nlohmann::ordered_json(*r.wall_ms) : nlohmann::ordered_json();
    arr.push_back(std::move(o));
  }
  os << arr.dump(1) << '\n';
}

// --------------------------------------------------------------- commands

namespace detail {

class Recorder {
 public:
  Recorder(std::string id, const ExperimentConfig& cfg) : id_(std::move(id)), cfg_(cfg) {}

  ExperimentRecord& add(std::int64_t n, std::optional<std::int64_t> t, std::string statistic, RecordValue value,
                        nlohmann::ordered_json params = nlohmann::ordered_json::object(), std::optional<double> se = std::nullopt,
                        std::optional<std::uint64_t> seed = std::nullopt) {
    result.records.push_back({id_, n, t, std::move(params), std::move(statistic), std::move(value), se, seed, std::nullopt});
    return result.records.back();
  }

  /// Violation rows are capped at kViolationRowLimit, with a final row
  /// giving the number left out.
  void violation(std::int64_t n, const std::string& what, nlohmann::ordered_json params = nlohmann::ordered_json::object()) {
    ++result.violations;
    if (result.violations <= kViolationRowLimit) add(n, std::nullopt, "violation", what, std::move(params));
  }

  void close_violations() {
    if (result.violations > kViolationRowLimit)
      add(0, std::nullopt, "violations_not_listed", result.violations - kViolationRowLimit);
    add(0, std::nullopt, "violations", result.violations);
  }

  /// Seed of the k-th stochastic experiment of this command.
  std::uint64_t experiment_seed() { return derive_seed(*cfg_.seed, experiment_index_++); }

  /// Times a block and stamps wall_ms on the rows it added, when enabled.
  template <class Fn>
  void timed(Fn fn) {
    const std::size_t first = result.records.size();
    const auto start = std::chrono::steady_clock::now();
    fn();
    if (!cfg_.record_wall_time) return;
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    for (std::size_t i = first; i < result.records.size(); ++i) result.records[i].wall_ms = ms;
  }

  CommandResult result;

 private:
  std::string id_;
  const ExperimentConfig& cfg_;
  std::uint64_t experiment_index_ = 0;
};

inline std::vector<int> grid_or(const ExperimentConfig& cfg, std::vector<int> fallback) {
  return cfg.n_grid.empty() ? fallback : cfg.n_grid;
}

inline void require_seed(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw UsageError(cfg.command + " is stochastic and needs --seed");
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

}  // namespace detail

/// d(t) from (1^n) for t = 0..t_max, tau_mix(eps), and the S_n cross-check
/// for n <= 5.
inline CommandResult cmd_exact_tv(const ExperimentConfig& cfg) {
  detail::Recorder rec("exact-tv", cfg);
  const auto grid = detail::grid_or(cfg, {3, 4, 5, 6, 7, 8});
  const std::int64_t t_max = cfg.t_max.value_or(30);
  detail::require(t_max >= 0 && t_max <= 2000, "--t-max must lie in [0, 2000]");
  detail::require(cfg.eps > 0 && cfg.eps < 1, "--eps must lie in (0, 1)");
  for (int n : grid) detail::require(n >= 1 && n <= kMaxExactN, "exact-tv needs 1 <= n <= 12");
  const Rational eps(cfg.eps);  // exact value of the double
  for (int n : grid) {
    rec.timed([&] {
      ExactDistanceScan scan(n);
      std::vector<Rational> curve{scan.distance()};
      while (scan.t() < t_max) {
        scan.advance();
        curve.push_back(scan.distance());
      }
      for (std::int64_t t = 0; t <= t_max; ++t) {
        const auto& d = curve[static_cast<std::size_t>(t)];
        rec.add(n, t, "d", to_double(d));
        rec.add(n, t, "d_exact", to_string(d));
        if (t > 0 && d > curve[static_cast<std::size_t>(t - 1)])
          rec.violation(n, "d increased at t=" + std::to_string(t));
      }
      try {
        rec.add(n, std::nullopt, "tau_mix", static_cast<std::int64_t>(mixing_time_exact(n, eps)), {{"eps", cfg.eps}});
      } catch (const std::logic_error& e) {
        rec.violation(n, e.what());
      }
      if (n <= 5) {
        double gap = 0;
        for (std::int64_t t = 0; t <= t_max; ++t) {
          const double sn = static_cast<double>(exact_d_sn(n, static_cast<int>(t)));
          gap = std::max(gap, std::fabs(sn - to_double(curve[static_cast<std::size_t>(t)])));
        }
        rec.add(n, std::nullopt, "max_gap_vs_sn", gap, {{"t_max", t_max}});
        if (gap > 1e-12) rec.violation(n, "S_n and partition distances differ by " + format_double(gap));
      }
    });
  }
  rec.close_violations();
  return std::move(rec.result);
}

/// Exhaustive coupling checks for n = 2..n_max: exact marginals, support at
/// distance at most one, meet probability >= 4s/n^2, residual >= 2b/n^2, and
/// agreement of the two constructions.
inline CommandResult cmd_verify_coupling(const ExperimentConfig& cfg) {
  detail::Recorder rec("verify-coupling", cfg);
  const int n_max = cfg.n_max.value_or(10);
  detail::require(n_max >= 2 && n_max <= 14, "verify-coupling needs 2 <= --n-max <= 14");
  for (int n = 2; n <= n_max; ++n) {
    rec.timed([&] {
      std::int64_t pairs = 0;
      Rational min_margin = 1;
      const Rational n2 = Rational(n) * n;
      for (const auto& x : all_partitions(n)) {
        const auto px = transition_distribution(x);
        for (const auto& y : neighbors(x)) {
          ++pairs;
          const nlohmann::ordered_json where{{"x", x.to_string()}, {"y", y.to_string()}};
          const auto j = coupled_joint(x, y);
          if (j.x_marginal().entries != px.entries) rec.violation(n, "x marginal", where);
          if (j.y_marginal().entries != transition_distribution(y).entries) rec.violation(n, "y marginal", where);
          for (const auto& [key, w] : j.entries)
            if (!(key.first == key.second) && !neighbors(key.first).contains(key.second)) rec.violation(n, "support", where);
          const auto st = pair_stats(x, y);
          const Rational margin = j.diagonal() - 4 * st.s / n2;
          if (margin < 0) rec.violation(n, "meet bound", where);
          min_margin = std::min(min_margin, margin);
          if (stay_split_residual(x, y) < 2 * st.s / n2) rec.violation(n, "residual bound", where);
          if (CouplingProcess(x, y).one_step_joint().entries != j.entries) rec.violation(n, "engine disagrees", where);
        }
      }
      rec.add(n, std::nullopt, "pairs", pairs);
      rec.add(n, std::nullopt, "min_meet_margin", to_string(min_margin));
    });
  }
  rec.close_violations();
  return std::move(rec.result);
}

inline CommandResult cmd_lemma_grid(const ExperimentConfig& cfg) {
  detail::Recorder rec("lemma-grid", cfg);
  const int n_max = cfg.n_max.value_or(12);
  detail::require(n_max >= 2 && n_max <= kMaxLemmaGridN, "lemma-grid needs 2 <= --n-max <= 14");
  rec.timed([&] {
    const auto g = run_grid(n_max);
    rec.add(n_max, std::nullopt, "pairs", g.pairs);
    for (const auto& [id, c] : g.counts) {
      const nlohmann::ordered_json p{{"lemma", id}};
      rec.add(n_max, std::nullopt, "checked", c.checked, p);
      rec.add(n_max, std::nullopt, "vacuous", c.vacuous, p);
      rec.add(n_max, std::nullopt, "violation_count", c.violations, p);
    }
    rec.add(n_max, std::nullopt, "cross_check_mismatches", g.cross_check_mismatches);
    for (const auto& v : g.violations)
      rec.violation(v.n, v.lemma + " " + v.input,
                    {{"lemma", v.lemma}, {"input", v.input}, {"lhs", to_string(v.lhs)}, {"rhs", to_string(v.rhs)}});
    for (std::int64_t i = 0; i < g.cross_check_mismatches; ++i) rec.violation(n_max, "lhs routes disagree");
  });
  rec.close_violations();
  return std::move(rec.result);
}

/// Mean s(X_t, Y_t) and the meet fraction from ((1^n), (2, 1^(n-2))).
inline CommandResult cmd_meeting(const ExperimentConfig& cfg) {
  detail::require_seed(cfg);
  detail::Recorder rec("meeting", cfg);
  const auto grid = detail::grid_or(cfg, {500, 1000, 2000});
  const std::int64_t trials = cfg.trials.value_or(200);
  detail::require(trials >= 1, "--trials must be positive");
  for (int n : grid) detail::require(n >= 2, "meeting needs n >= 2");
  for (int n : grid) {
    const std::int64_t t_max = cfg.t_max.value_or(10 * static_cast<std::int64_t>(n));
    const std::int64_t stride = cfg.stride.value_or(std::max<std::int64_t>(1, n / 2));
    detail::require(t_max >= 0, "--t-max must be nonnegative");
    const auto seed = rec.experiment_seed();
    rec.timed([&] {
      const auto [x0, y0] = default_start(n);
      const auto tr = expected_s_trajectory(x0, y0, t_max, trials, seed, stride, cfg.threads);
      const nlohmann::ordered_json p{{"trials", trials}, {"start", "(1^n),(2,1^(n-2))"}};
      for (std::size_t i = 0; i < tr.t.size(); ++i) {
        rec.add(n, tr.t[i], "mean_s", tr.mean_s[i], p, tr.se_s[i], seed);
        rec.add(n, tr.t[i], "mean_s_over_n", tr.mean_s[i] / n, p, tr.se_s[i] / n, seed);
        rec.add(n, tr.t[i], "meet_fraction", tr.meet_fraction[i], p, std::nullopt, seed);
        if (i > 0 && tr.meet_fraction[i] < tr.meet_fraction[i - 1]) rec.violation(n, "meet fraction decreased");
      }
    });
  }
  rec.close_violations();
  return std::move(rec.result);
}

/// PD(1) comparison, giant component, the n^(1/3) event and the schedule
/// failure probability.
inline CommandResult cmd_schramm(const ExperimentConfig& cfg) {
  detail::require_seed(cfg);
  detail::Recorder rec("schramm", cfg);
  const auto grid = detail::grid_or(cfg, {10000});
  const std::int64_t trials = cfg.trials.value_or(200);
  const double eps = cfg.eps_set ? cfg.eps : 1.0 / 64;
  detail::require(trials >= 1, "--trials must be positive");
  detail::require(cfg.k >= 1, "--k must be positive");
  for (int n : grid) detail::require(n >= 64, "schramm needs n >= 64");
  for (int n : grid) {
    const int j = cfg.j.value_or(default_j(n));
    const auto pd_seed = rec.experiment_seed();
    rec.timed([&] {
      const std::int64_t t = cfg.t_max.value_or(n);
      const auto c = pd1_comparison(n, t, trials, cfg.k, pd_seed, 20 * trials, cfg.threads);
      for (int i = 0; i < cfg.k; ++i) {
        const nlohmann::ordered_json p{{"coordinate", i + 1}, {"trials", trials}, {"reference_samples", 20 * trials}};
        const auto ui = static_cast<std::size_t>(i);
        rec.add(n, t, "ks_distance", c.ks[ui], p, std::nullopt, pd_seed);
        rec.add(n, t, "walk_mean", c.walk[ui].mean, p, c.walk[ui].se, pd_seed);
        rec.add(n, t, "pd1_mean", c.reference[ui].mean, p, c.reference[ui].se, pd_seed);
      }
      rec.add(n, t, "giant_fraction", c.giant.mean, {{"trials", trials}}, c.giant.se, pd_seed);
    });
    for (double cc : {0.75, 1.0, 1.5}) {
      const auto seed = rec.experiment_seed();
      rec.timed([&] {
        const auto g = giant_fraction(n, cc, trials, seed, cfg.threads);
        const nlohmann::ordered_json p{{"c", cc}, {"trials", trials}};
        const auto t = static_cast<std::int64_t>(std::llround(cc * n));
        rec.add(n, t, "giant_fraction", g.mean, p, g.se, seed);
        rec.add(n, t, "z_2c", z_solver(2 * cc), p);
      });
    }
    const auto rootn_seed = rec.experiment_seed();
    rec.timed([&] {
      const auto est = rootn_check(n, trials, rootn_seed, {9 * static_cast<std::int64_t>(n), 12 * static_cast<std::int64_t>(n)}, cfg.threads);
      for (const auto& e : est) {
        const nlohmann::ordered_json p{{"trials", trials}, {"wilson_lo", e.lo}, {"wilson_hi", e.hi}};
        rec.add(n, e.t, "rootn_probability", e.p, p, std::nullopt, rootn_seed);
      }
    });
    const auto sbig_seed = rec.experiment_seed();
    rec.timed([&] {
      const auto e = sbig_check(n, j, eps, cfg.delta, trials, sbig_seed, cfg.threads);
      const nlohmann::ordered_json p{{"j", j},
                                     {"epsilon", eps},
                                     {"delta", cfg.delta},
                                     {"K", e.schedule.K},
                                     {"tau_K", e.schedule.tau_K()},
                                     {"attempts", e.attempts},
                                     {"accepted", e.accepted},
                                     {"wilson_lo", e.failure.lo},
                                     {"wilson_hi", e.failure.hi},
                                     {"shape", e.shape}};
      rec.add(n, e.failure.t, "sbig_failure", e.failure.p, p, std::nullopt, sbig_seed);
    });
  }
  rec.close_violations();
  return std::move(rec.result);
}

}  // namespace smlab
