#include <gtest/gtest.h>

#include <cmath>

#include "smlab/schramm_stats.hpp"

using namespace smlab;

TEST(ZSolver, OracleValues) {
  EXPECT_NEAR(z_solver(2.0), 0.7968121300200199, 1e-12);
  EXPECT_NEAR(z_solver(4.0), 0.9801725987182215, 1e-12);
  EXPECT_NEAR(z_solver(1.5), 0.5828116438658113, 1e-12);
  EXPECT_NEAR(z_solver(3.0), 0.9404797907073595, 1e-12);
  for (double s : {1.001, 1.1, 2.0, 5.0, 20.0}) {
    const double z = z_solver(s);
    EXPECT_GT(z, 0);
    EXPECT_LT(z, 1);
    EXPECT_LE(std::fabs(1 - z - std::exp(-z * s)), 1e-12) << s;
  }
  EXPECT_GT(z_solver(4.0), 0.97);
  EXPECT_THROW(z_solver(1.0), InvalidInput);
  EXPECT_THROW(z_solver(0.5), InvalidInput);
}

TEST(PD1, SampleIsSortedAndSumsBelowOne) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto s = pd1_sample(rng, 8);
    ASSERT_LE(s.top.size(), 8u);
    double sum = 0;
    for (std::size_t k = 0; k < s.top.size(); ++k) {
      sum += s.top[k];
      if (k > 0) {
        EXPECT_GE(s.top[k - 1], s.top[k]);
      }
    }
    EXPECT_LE(sum, 1 + 1e-12);
    if (!s.top.empty()) {
      EXPECT_LE(s.hidden_max, s.top.back());
    }
  }
}

TEST(PD1, GStatisticMeanIsOneMinusX) {
  // E[sum of coordinates >= x] = integral_x^1 (1/y) y dy = 1 - x
  for (double x : {0.1, 0.3, 0.5, 0.8}) {
    const auto m = pd1_g_mean(x, 40000, 101);
    EXPECT_NEAR(m.mean, 1 - x, 4 * m.se + 1e-3) << x;
  }
  Rng rng(1);
  const auto s = pd1_sample(rng, 4);
  EXPECT_THROW(g_statistic(s, 0.0), InvalidInput);
  EXPECT_THROW(g_statistic(s, 1.0), InvalidInput);
}

TEST(PD1, LargestCoordinateMean) {
  Rng rng(77);
  double sum = 0;
  const int N = 40000;
  for (int i = 0; i < N; ++i) sum += pd1_sample(rng, 1).top[0];
  EXPECT_NEAR(sum / N, kGolombDickman, 0.006);
}

TEST(GiantComponent, MatchesZ) {
  const auto sub = giant_fraction(4000, 0.75, 20, 9);
  EXPECT_NEAR(sub.mean, z_solver(1.5), 0.02);
  const auto low = giant_fraction(4000, 0.25, 20, 9);
  EXPECT_LT(low.mean, 0.01);
}

TEST(KsDistance, Basics) {
  EXPECT_DOUBLE_EQ(ks_distance({1, 2, 3}, {1, 2, 3}), 0);
  EXPECT_DOUBLE_EQ(ks_distance({0, 0}, {1, 1}), 1);
  EXPECT_DOUBLE_EQ(ks_distance({0, 2}, {1, 3}), 0.5);
}

TEST(Schedule, SmallCases) {
  EXPECT_EQ(default_j(10000), 3);
  EXPECT_EQ(default_j(4095), 2);
  EXPECT_EQ(default_j(4096), 3);
  EXPECT_EQ(default_j(8), 0);

  const auto g = make_schedule(10000, 3, 1.0 / 64, 0.5);
  EXPECT_EQ(g.K, 7);
  EXPECT_EQ(g.tau_at(3), 0);
  EXPECT_EQ(g.a, (std::vector<std::int64_t>{51439, 23220, 10360, 4555}));
  EXPECT_EQ(g.tau_K(), 89574);

  EXPECT_EQ(make_schedule(std::int64_t{1} << 20, 3, 1.0 / 64, 0.5).K, 13);

  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(8), 3);
  EXPECT_EQ(ceil_log2(8.0000001), 4);
  EXPECT_EQ(ceil_log2(0.75), 0);
}

TEST(Schedule, OracleGrid) {
  struct Row {
    std::int64_t n;
    int j;
    double eps, delta;
    int K;
    std::int64_t tau_K;
  };
  const Row rows[] = {
      {3000000, 4, 0.01, 0.1, 12, 123624477},
      {50000, 1, 0.001, 0.1, 3, 10707232},
      {10000, 0, 0.01, 0.25, 5, 1929598},
      {10000, 0, 0.001, 1.0, 4, 470792},
      {1000000, 3, 0.001, 0.5, 9, 15776392},
      {1000, 1, 0.025, 1.0, 5, 15437},
      {3000000, 2, 0.01, 0.5, 14, 111089648},
      {50000, 2, 0.01, 1.0, 9, 628296},
      {4096, 3, 0.030303030303030304, 0.1, 4, 92160},
      {4096, 2, 0.030303030303030304, 0.5, 6, 71168},
      {100000, 0, 0.015625, 1.0, 11, 6242964},
      {1000000, 0, 0.030303030303030304, 0.1, 12, 757195057},
      {4096, 0, 0.015625, 0.5, 5, 354304},
      {50000, 0, 0.01, 0.1, 6, 28950234},
      {1000000, 3, 0.015625, 0.5, 13, 15925782},
      {100000, 2, 0.015625, 0.25, 9, 5423207},
      {1048576, 0, 0.01, 1.0, 14, 79690496},
      {10000, 1, 0.015625, 1.0, 8, 225088},
      {50000, 3, 0.001, 0.5, 5, 460363},
      {10000, 3, 0.01, 1.0, 7, 44788},
      {1000000, 3, 0.025, 1.0, 15, 7965312},
      {100000, 4, 0.030303030303030304, 1.0, 12, 289893},
      {50000, 1, 0.01, 1.0, 9, 1358779},
      {1000, 1, 0.025, 0.1, 2, 89658},
  };
  for (const auto& r : rows) {
    const auto g = make_schedule(r.n, r.j, r.eps, r.delta);
    EXPECT_EQ(g.K, r.K) << r.n << ' ' << r.j << ' ' << r.eps << ' ' << r.delta;
    EXPECT_EQ(g.tau_K(), r.tau_K) << r.n << ' ' << r.j << ' ' << r.eps << ' ' << r.delta;
    EXPECT_EQ(g.tau_at(r.j), 0);
    for (int k = r.j; k < g.K; ++k) EXPECT_EQ(g.tau_at(k + 1) - g.tau_at(k), g.a_at(k));
  }
}

TEST(Schedule, SublinearAtLargeN) {
  for (std::int64_t n : {std::int64_t{1} << 24, std::int64_t{1} << 30, std::int64_t{1} << 36}) {
    const auto g = make_schedule(n, default_j(n), 1.0 / 64, 0.5);
    EXPECT_LT(g.tau_K(), n) << n;
    EXPECT_LT(static_cast<double>(g.tau_K()), 40 * g.magnitude()) << n;
  }
  const auto a = make_schedule(std::int64_t{1} << 24, default_j(std::int64_t{1} << 24), 1.0 / 64, 0.5);
  const auto b = make_schedule(std::int64_t{1} << 36, default_j(std::int64_t{1} << 36), 1.0 / 64, 0.5);
  EXPECT_LT(static_cast<double>(b.tau_K()) / b.n, static_cast<double>(a.tau_K()) / a.n);
}

TEST(Schedule, Errors) {
  EXPECT_THROW(make_schedule(10000, 3, 1.0 / 32, 0.5), InvalidInput);
  EXPECT_THROW(make_schedule(10000, 3, 0.0, 0.5), InvalidInput);
  EXPECT_THROW(make_schedule(10000, 3, 0.01, 0.0), InvalidInput);
  EXPECT_THROW(make_schedule(10000, 3, 0.01, 1.5), InvalidInput);
  EXPECT_THROW(make_schedule(10, 3, 0.01, 0.5), InvalidInput);
  EXPECT_THROW(make_schedule(10000, 7, 0.01, 0.5), InvalidInput);  // K <= j
  EXPECT_THROW(default_j(7), InvalidInput);
}

TEST(Wilson, KnownValues) {
  const auto w = wilson(0, 100);
  EXPECT_DOUBLE_EQ(w.p, 0);
  EXPECT_DOUBLE_EQ(w.lo, 0);
  EXPECT_NEAR(w.hi, 0.0370, 1e-4);
  const auto h = wilson(50, 100);
  EXPECT_NEAR(h.lo, 0.4038, 1e-4);
  EXPECT_NEAR(h.hi, 0.5962, 1e-4);
  const auto f = wilson(100, 100);
  EXPECT_DOUBLE_EQ(f.hi, 1);
}

TEST(ExpectedS, BoundsAndMonotoneMeeting) {
  const auto [x0, y0] = default_start(60);
  const auto tr = expected_s_trajectory(x0, y0, 600, 40, 3, 10);
  ASSERT_EQ(tr.t.front(), 0);
  EXPECT_DOUBLE_EQ(tr.mean_s.front(), 1);
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    EXPECT_GE(tr.mean_s[i], 1);
    EXPECT_LE(tr.mean_s[i], 30);
    if (i > 0) {
      EXPECT_GE(tr.meet_fraction[i], tr.meet_fraction[i - 1]);
    }
  }
  // thread count does not change results
  const auto tr4 = expected_s_trajectory(x0, y0, 600, 40, 3, 10, 4);
  EXPECT_EQ(tr.mean_s, tr4.mean_s);
  EXPECT_EQ(tr.meet_fraction, tr4.meet_fraction);
}

TEST(FixedCycleLaw, MatchesExactStationary) {
  const FixedCycleCells cells{2, 3};
  for (int n = 1; n <= 8; ++n) {
    std::vector<Rational> exact(static_cast<std::size_t>(cells.size()), 0);
    for (const auto& p : all_partitions(n)) {
      std::int64_t fixed = 0;
      for (int a : p.parts()) fixed += a == 1;
      exact[static_cast<std::size_t>(cells.cell(fixed, static_cast<std::int64_t>(p.parts().size())))] += stationary(p);
    }
    const auto law = stationary_fixed_cycle_law(n, cells);
    for (std::size_t c = 0; c < law.size(); ++c) EXPECT_NEAR(law[c], to_double(exact[c]), 1e-15) << n << ' ' << c;
  }
}

TEST(McDistance, StartsAtOneAndDecays) {
  const auto d = mc_distance_curve(40, {0, 300}, 4000, 17);
  EXPECT_GT(d[0].value, 0.99);
  EXPECT_LT(d[1].value, 0.1);
  EXPECT_GT(d[1].se, 0);
}

TEST(Rootn, LaterTimeNotWorse) {
  const auto e = rootn_check(10000, 300, 31, {90000, 120000});
  ASSERT_EQ(e.size(), 2u);
  const double sigma = std::sqrt(std::max(e[0].p * (1 - e[0].p), 1e-4) / 300);
  EXPECT_GE(e[1].p, e[0].p - 3 * sigma);
  EXPECT_GE(e[0].hi, 0.5);
}

TEST(Sbig, PilotRegression) {
  // pilot: 0 of 400 accepted starts failed, at eps = 1/64 and at eps = 1/128
  const auto a = sbig_check(10000, default_j(10000), 1.0 / 64, 0.5, 150, 41);
  const auto b = sbig_check(10000, default_j(10000), 1.0 / 128, 0.5, 150, 41);
  EXPECT_EQ(a.schedule.tau_K(), 89574);
  EXPECT_GT(a.accepted, 140);
  EXPECT_LE(a.failure.lo, 0.0);
  const double sigma = std::sqrt(std::max(a.failure.p * (1 - a.failure.p), 1e-4) / static_cast<double>(a.accepted));
  EXPECT_LE(b.failure.p, a.failure.p + 3 * sigma);
}
