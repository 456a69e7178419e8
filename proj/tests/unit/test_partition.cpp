#include <gtest/gtest.h>

#include "smlab/partition.hpp"

using namespace smlab;

namespace {
Partition P(std::initializer_list<int> parts) { return Partition(std::vector<int>(parts)); }
}  // namespace

TEST(Partition, CanonicalizeSorts) {
  EXPECT_EQ(canonicalize({1, 4}), P({4, 1}));
  EXPECT_EQ(canonicalize({2, 2, 1}).parts(), (std::vector<int>{2, 2, 1}));
  EXPECT_EQ(canonicalize({3, 1, 1, 3}).parts(), (std::vector<int>{3, 3, 1, 1}));
  EXPECT_EQ(P({3, 1, 1, 3}).n(), 8);
  EXPECT_EQ(P({4, 1}).to_string(), "(4,1)");
}

TEST(Partition, RejectsBadInput) {
  EXPECT_THROW(canonicalize({}), InvalidInput);
  EXPECT_THROW(canonicalize({2, 0}), InvalidInput);
  EXPECT_THROW(canonicalize({-1, 3}), InvalidInput);
}

// class sizes and pi for n = 3 from enumerating S_3 (tools/oracles/oracle.py)
TEST(Partition, PermCountAndStationarySmall) {
  EXPECT_EQ(perm_count(P({1, 1, 1})), 1);
  EXPECT_EQ(perm_count(P({2, 1})), 3);
  EXPECT_EQ(perm_count(P({3})), 2);
  EXPECT_EQ(stationary(P({1, 1, 1})), Rational(1, 6));
  EXPECT_EQ(stationary(P({2, 1})), Rational(1, 2));
  EXPECT_EQ(stationary(P({3})), Rational(1, 3));
}

TEST(Partition, StationarySumsToOne) {
  for (int n = 1; n <= 20; ++n) {
    Rational total = 0;
    for (const auto& p : all_partitions(n)) total += stationary(p);
    EXPECT_EQ(total, 1) << "n=" << n;
  }
}

TEST(Partition, EnumerationCountsAndOrder) {
  const int expected[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135};
  for (int n = 1; n <= 14; ++n) EXPECT_EQ(all_partitions(n).size(), static_cast<std::size_t>(expected[n])) << n;
  const auto p5 = all_partitions(5);
  EXPECT_EQ(p5.front(), P({5}));
  EXPECT_EQ(p5.back(), Partition::ones(5));
  for (std::size_t i = 1; i < p5.size(); ++i) EXPECT_TRUE(p5[i - 1] > p5[i]);
}

TEST(Partition, PairStats) {
  auto st = pair_stats(P({4, 1}), P({5}));
  EXPECT_EQ(st.s, 1);
  EXPECT_EQ(st.m, 4);
  st = pair_stats(P({2, 3}), P({5}));
  EXPECT_EQ(st.s, 2);
  EXPECT_EQ(st.m, 3);
  st = pair_stats(P({2, 1}), P({2, 1}));
  EXPECT_EQ(st.s, Rational(3, 2));
  EXPECT_EQ(st.m, 3);
  // symmetric in its arguments
  st = pair_stats(P({5}), P({4, 1}));
  EXPECT_EQ(st.s, 1);
  EXPECT_EQ(st.m, 4);
}

TEST(Partition, PairStatsErrors) {
  EXPECT_THROW(pair_stats(P({3}), P({1, 1, 1})), NotNeighbors);
  EXPECT_THROW(pair_stats(P({3}), P({2, 2})), InvalidInput);
}

TEST(Partition, PairStatsOnAllNeighborPairs) {
  for (int n = 2; n <= 10; ++n) {
    for (const auto& p : all_partitions(n)) {
      for (const auto& q : neighbors(p)) {
        const auto st = pair_stats(p, q);
        ASSERT_EQ(denominator(st.s), 1);
        ASSERT_EQ(denominator(st.m), 1);
        ASSERT_LE(st.s, st.m);
        const int sum = static_cast<int>(numerator(Rational(st.s + st.m)));
        const auto in = [&](const Partition& r) {
          return std::count(r.parts().begin(), r.parts().end(), sum);
        };
        // the merged part appears once more on one side than the other
        ASSERT_EQ(std::abs(in(p) - in(q)), 1);
      }
    }
  }
}

TEST(Partition, Neighbors) {
  EXPECT_EQ(neighbors(P({4, 1})), (std::set<Partition>{P({5}), P({3, 1, 1}), P({2, 2, 1})}));
  EXPECT_EQ(neighbors(P({1, 1})), (std::set<Partition>{P({2})}));
  EXPECT_EQ(neighbors(P({2})), (std::set<Partition>{P({1, 1})}));
  for (int n = 1; n <= 10; ++n)
    for (const auto& p : all_partitions(n)) {
      const auto np = neighbors(p);
      EXPECT_FALSE(np.contains(p));
      for (const auto& q : np) EXPECT_TRUE(neighbors(q).contains(p));
    }
}

TEST(Partition, Rho) {
  EXPECT_EQ(rho(P({3}), P({3})), 0);
  EXPECT_EQ(rho(P({4, 1}), P({5})), 1);
  EXPECT_EQ(rho(P({3}), P({1, 1, 1})), 2);
  EXPECT_THROW(rho(P({3}), P({4})), InvalidInput);
}

TEST(Partition, RhoIsAMetric) {
  for (int n = 1; n <= 10; ++n) {
    PartitionGraph g(n);
    const std::size_t k = g.states.size();
    std::vector<std::vector<int>> d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = g.distances_from(static_cast<int>(i));
    for (std::size_t i = 0; i < k; ++i) {
      ASSERT_EQ(d[i][i], 0);
      for (std::size_t j = 0; j < k; ++j) {
        ASSERT_EQ(d[i][j], d[j][i]);
        ASSERT_EQ(d[i][j] == 0, i == j);
        for (std::size_t l = 0; l < k; ++l) ASSERT_LE(d[i][l], d[i][j] + d[j][l]);
      }
    }
    // BFS on the fly agrees with the graph
    if (n <= 7) {
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) ASSERT_EQ(rho(g.states[i], g.states[j]), d[i][j]);
    }
  }
}

// BFS oracle: diameter(n) = n - 1 for 2 <= n <= 14
TEST(Partition, Diameter) {
  EXPECT_EQ(diameter(2), 1);
  EXPECT_EQ(diameter(3), 2);
  EXPECT_EQ(diameter(6), 5);
  EXPECT_EQ(diameter(10), 9);
  EXPECT_THROW(diameter(41), ResourceGuard);
}

TEST(Partition, VStat) {
  EXPECT_EQ(v_stat(P({4, 1}), 2), 4);
  EXPECT_EQ(v_stat(P({4, 1}), 1), 5);
  EXPECT_EQ(v_stat(P({2, 2, 1}), 5), 0);
  EXPECT_EQ(v_stat(P({3, 2, 2}), 2.5), 3);
}
