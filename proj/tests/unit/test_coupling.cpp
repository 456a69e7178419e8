#include <gtest/gtest.h>

#include <cmath>

#include "smlab/coupling.hpp"

using namespace smlab;

namespace {
Partition P(std::initializer_list<int> parts) { return Partition(std::vector<int>(parts)); }

using Key = std::pair<Partition, Partition>;

Key K(std::initializer_list<int> x, std::initializer_list<int> y) { return {P(x), P(y)}; }

const std::map<Key, Rational> kExample1 = {
    {K({1, 1, 3}, {1, 4}), Rational(2, 25)}, {K({1, 2, 2}, {1, 4}), Rational(6, 25)},
    {K({2, 3}, {2, 3}), Rational(5, 25)},    {K({5}, {1, 4}), Rational(2, 25)},
    {K({5}, {2, 3}), Rational(5, 25)},       {K({5}, {5}), Rational(5, 25)},
};

const std::map<Key, Rational> kExample2 = {
    {K({1, 1, 1, 3}, {1, 1, 4}), Rational(2, 36)}, {K({3, 3}, {6}), Rational(4, 36)},
    {K({1, 5}, {6}), Rational(12, 36)},            {K({2, 1, 1, 2}, {2, 1, 3}), Rational(6, 36)},
    {K({2, 1, 3}, {2, 1, 3}), Rational(2, 36)},    {K({2, 4}, {2, 2, 2}), Rational(4, 36)},
    {K({2, 4}, {2, 4}), Rational(2, 36)},          {K({2, 1, 3}, {2, 4}), Rational(4, 36)},
};

std::map<Key, Rational> as_map(const JointDistribution& j) { return {j.entries.begin(), j.entries.end()}; }
}  // namespace

TEST(Coupling, ExampleOne) {
  const auto j = coupled_joint(P({2, 3}), P({5}));
  EXPECT_EQ(as_map(j), kExample1);
  EXPECT_EQ(meet_probability(P({2, 3}), P({5})), Rational(10, 25));
}

TEST(Coupling, ExampleOneReversedOrientation) {
  const auto j = coupled_joint(P({5}), P({2, 3}));
  std::map<Key, Rational> flipped;
  for (const auto& [k, w] : kExample1) flipped[{k.second, k.first}] = w;
  EXPECT_EQ(as_map(j), flipped);
}

TEST(Coupling, ExampleTwo) {
  EXPECT_EQ(as_map(coupled_joint(P({2, 1, 3}), P({2, 4}))), kExample2);
  EXPECT_EQ(meet_probability(P({2, 1, 3}), P({2, 4})), Rational(4, 36));
}

TEST(Coupling, ExampleOneMarginals) {
  const auto j = coupled_joint(P({2, 3}), P({5}));
  EXPECT_EQ(j.x_marginal().entries, transition_distribution(P({2, 3})).entries);
  EXPECT_EQ(j.y_marginal().entries, transition_distribution(P({5})).entries);
}

TEST(Coupling, TwoPartsAlwaysMeet) {
  EXPECT_EQ(meet_probability(P({1, 1}), P({2})), 1);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto tr = run_coupling(P({1, 1}), P({2}), 3, rng);
    ASSERT_TRUE(tr.meet_time.has_value());
    EXPECT_EQ(*tr.meet_time, 1);
  }
}

TEST(Coupling, Errors) {
  EXPECT_THROW(coupled_joint(P({3}), P({1, 1, 1})), NotNeighbors);
  EXPECT_THROW(coupled_joint(P({2, 1}), P({2, 1})), NotNeighbors);
  EXPECT_THROW(coupled_joint(P({3}), P({2, 2})), InvalidInput);
}

// every neighbor pair for n <= 10, both orientations
TEST(Coupling, ExhaustiveSoundness) {
  for (int n = 2; n <= 10; ++n) {
    const Rational n2 = Rational(n) * n;
    for (const auto& x : all_partitions(n)) {
      const auto px = transition_distribution(x);
      for (const auto& y : neighbors(x)) {
        const auto j = coupled_joint(x, y);
        ASSERT_EQ(j.total(), 1);
        ASSERT_EQ(j.x_marginal().entries, px.entries) << x.to_string() << " " << y.to_string();
        ASSERT_EQ(j.y_marginal().entries, transition_distribution(y).entries);
        for (const auto& [k, w] : j.entries) {
          ASSERT_TRUE(k.first == k.second || neighbors(k.first).contains(k.second));
          ASSERT_EQ(n * n % static_cast<int>(denominator(w)), 0);
        }
        const auto st = pair_stats(x, y);
        ASSERT_GE(j.diagonal(), 4 * st.s / n2);
        ASSERT_GE(stay_split_residual(x, y), 2 * st.s / n2);

        // the streaming engine's exact law is the same joint
        const CouplingProcess proc(x, y);
        ASSERT_EQ(proc.x(), x);
        ASSERT_EQ(proc.y(), y);
        ASSERT_EQ(as_map(proc.one_step_joint()), as_map(j));
      }
    }
  }
}

TEST(Coupling, MergeResidualClosedForm) {
  for (int n = 2; n <= 40; ++n)
    for (int b = 1; 2 * b <= n; ++b)
      for (int c = b; b + c <= n; ++c) {
        const auto res = merge_residual(b, c, n);
        EXPECT_EQ(res.total(), 2 * static_cast<std::int64_t>(b) * c) << n << " " << b << " " << c;
      }
}

TEST(Coupling, SamplerMatchesExampleOne) {
  Rng rng(2024);
  const std::int64_t trials = 1000000;
  std::map<Key, std::int64_t> hits;
  for (std::int64_t i = 0; i < trials; ++i) {
    const auto next = coupled_step(CoupledPair::start(P({2, 3}), P({5})), rng);
    ASSERT_TRUE(next.x == next.y || neighbors(next.x).contains(next.y));
    ASSERT_EQ(next.met, next.x == next.y);
    ++hits[{next.x, next.y}];
  }
  EXPECT_EQ(hits.size(), kExample1.size());
  for (const auto& [k, w] : kExample1) {
    const double p = to_double(w);
    EXPECT_NEAR(static_cast<double>(hits[k]) / trials, p, 4 * std::sqrt(p * (1 - p) / trials));
  }
}

TEST(Coupling, SamplerChiSquare) {
  for (const auto& [x, y] : {K({4, 3, 2, 1}, {4, 3, 3}), K({1, 1, 1, 1, 1, 1}, {2, 1, 1, 1, 1}), K({6, 2, 2}, {6, 4})}) {
    const auto j = coupled_joint(x, y);
    Rng rng(derive_seed(31, static_cast<std::uint64_t>(x.size())));
    const std::int64_t trials = 1000000;
    std::map<Key, std::int64_t> hits;
    CouplingProcess start(x, y);
    for (std::int64_t i = 0; i < trials; ++i) {
      auto proc = start;
      proc.step(rng);
      ++hits[{proc.x(), proc.y()}];
    }
    double chi2 = 0;
    for (const auto& [k, w] : j.entries) {
      const double e = to_double(w) * trials;
      const double o = static_cast<double>(hits[k]);
      chi2 += (o - e) * (o - e) / e;
    }
    EXPECT_EQ(hits.size(), j.entries.size());
    const double dof = static_cast<double>(j.entries.size() - 1);
    EXPECT_LT(chi2, dof + 5 * std::sqrt(2 * dof)) << x.to_string() << " " << y.to_string();
  }
}

TEST(Coupling, MetPairRunsTogether) {
  Rng rng(8);
  auto state = CoupledPair::start(P({3, 2, 1}), P({3, 2, 1}));
  EXPECT_TRUE(state.met);
  EXPECT_EQ(state.stats.s, 3);
  for (int i = 0; i < 200; ++i) {
    state = coupled_step(state, rng);
    ASSERT_TRUE(state.met);
    ASSERT_EQ(state.x, state.y);
  }
  const auto tr = run_coupling(P({3, 2, 1}), P({3, 2, 1}), 5, rng);
  EXPECT_EQ(tr.meet_time, 0);
}

TEST(Coupling, TrajectoryStaysAdjacent) {
  const int n = 30;
  Rng rng(55);
  std::vector<int> y(n - 1, 1);
  y[0] = 2;
  CouplingProcess proc(Partition::ones(n), Partition(y));
  for (int t = 0; t < 5000; ++t) {
    proc.step(rng);
    const auto x = proc.x(), y = proc.y();
    ASSERT_EQ(x.n(), n);
    ASSERT_TRUE(x == y || neighbors(x).contains(y));
    ASSERT_EQ(proc.met(), x == y);
    const auto st = pair_stats(x, y);
    ASSERT_EQ(Rational(proc.s_twice(), 2), st.s);
    ASSERT_EQ(Rational(proc.m()), st.m);
    ASSERT_EQ(proc.v_stat_x(3.5), v_stat(x, 3.5));
  }
}

TEST(Coupling, MeetFractionNonDecreasing) {
  const int n = 50;
  std::vector<int> y(49, 1);
  y[0] = 2;
  const std::int64_t t_max = 2000;
  std::vector<int> met_by(t_max + 1, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    Rng rng(derive_seed(4, static_cast<std::uint64_t>(trial)));
    const auto tr = run_coupling(Partition::ones(n), Partition(y), t_max, rng);
    if (tr.meet_time) ++met_by[static_cast<std::size_t>(*tr.meet_time)];
    EXPECT_EQ(tr.s.front(), 1);
  }
  int cum = 0, prev = 0;
  for (int c : met_by) {
    cum += c;
    ASSERT_GE(cum, prev);
    prev = cum;
  }
  EXPECT_GT(cum, 0);
}
