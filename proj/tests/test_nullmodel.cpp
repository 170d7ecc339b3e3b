#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ledgergraph/nullmodel.hpp"

using namespace ledgergraph;

TEST(ErdosRenyi, SaturatedGraphIsComplete) {
  const auto g = erdos_renyi({3, EdgeCount{6}, true, 1});
  EXPECT_EQ(g.sorted_arcs(), (std::vector<Arc>{{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}));
}

TEST(ErdosRenyi, ZeroArcs) {
  const auto g = erdos_renyi({100, EdgeCount{0}, true, 1});
  EXPECT_EQ(g.node_count(), 100U);
  EXPECT_EQ(g.arc_count(), 0U);
}

TEST(ErdosRenyi, TooManyArcsIsRejected) {
  EXPECT_THROW(erdos_renyi({3, EdgeCount{7}, true, 1}), ContractError);
  EXPECT_THROW(erdos_renyi({4, EdgeCount{7}, false, 1}), ContractError);
  EXPECT_THROW(erdos_renyi({10, EdgeProbability{1.5}, true, 1}), ContractError);
}

TEST(ErdosRenyi, ExactCountWithoutLoopsOrDuplicates) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 5 + seed % 50;
    const std::uint64_t slots = n * (n - 1);
    const std::uint64_t m = (seed * 7919) % (slots + 1);
    const auto g = erdos_renyi({n, EdgeCount{m}, true, seed});
    ASSERT_EQ(g.arc_count(), m);
    EXPECT_EQ(g.self_loop_count(), 0U);
    EXPECT_EQ(g.total_multiplicity(), m);
  }
}

TEST(ErdosRenyi, DeterministicPerSeed) {
  const RandomGraphSpec spec{500, EdgeCount{3000}, true, 77};
  EXPECT_EQ(erdos_renyi(spec).sorted_arcs(), erdos_renyi(spec).sorted_arcs());
  auto other = spec;
  other.seed = 78;
  EXPECT_NE(erdos_renyi(spec).sorted_arcs(), erdos_renyi(other).sorted_arcs());
}

TEST(ErdosRenyi, UndirectedStoresBothDirections) {
  const auto g = erdos_renyi({30, EdgeCount{100}, false, 5});
  EXPECT_EQ(g.arc_count(), 200U);
  for (auto [a, b] : g.sorted_arcs()) EXPECT_TRUE(g.has_arc(b, a));
  const auto full = erdos_renyi({6, EdgeCount{15}, false, 5});
  EXPECT_EQ(full.arc_count(), 30U);
}

TEST(ErdosRenyi, ProbabilityModeConcentrates) {
  const double mean = 0.01 * 999000.0;
  const double sd = std::sqrt(999000.0 * 0.01 * 0.99);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = erdos_renyi({1000, EdgeProbability{0.01}, true, seed});
    EXPECT_LT(std::abs(static_cast<double>(g.arc_count()) - mean), 4.0 * sd) << "seed " << seed;
    EXPECT_EQ(g.self_loop_count(), 0U);
  }
  EXPECT_EQ(erdos_renyi({50, EdgeProbability{0.0}, true, 1}).arc_count(), 0U);
  EXPECT_EQ(erdos_renyi({50, EdgeProbability{1.0}, true, 1}).arc_count(), 50U * 49U);
}

TEST(WattsStrogatz, LatticeWithoutRewiring) {
  const auto g = watts_strogatz(10, 4, 0.0, 1);
  EXPECT_EQ(g.arc_count(), 40U);
  EXPECT_TRUE(g.has_arc(0, 9));
  EXPECT_TRUE(g.has_arc(0, 8));
  EXPECT_FALSE(g.has_arc(0, 5));
}

TEST(WattsStrogatz, RewiringKeepsEdgeCount) {
  const auto g = watts_strogatz(500, 10, 0.3, 4);
  EXPECT_EQ(g.arc_count(), 5000U);
  for (auto [a, b] : g.sorted_arcs()) EXPECT_TRUE(g.has_arc(b, a));
  EXPECT_THROW(watts_strogatz(10, 3, 0.1, 1), ContractError);
  EXPECT_THROW(watts_strogatz(10, 4, 1.1, 1), ContractError);
}

TEST(SmallWorldRatios, PublishedOneDayRippleInputs) {
  const auto r = small_world_ratios(0.0516, 0.000089, 4.4116, 16.1623);
  ASSERT_TRUE(r.acc_ratio && r.aspl_ratio && r.sigma);
  EXPECT_NEAR(*r.acc_ratio, 580.0, 1.0);
  EXPECT_NEAR(*r.aspl_ratio, 0.273, 0.001);
  EXPECT_NEAR(*r.sigma, *r.acc_ratio / *r.aspl_ratio, 1e-9);
  EXPECT_TRUE(r.undefined.empty());
}

TEST(SmallWorldRatios, IdentityAndUndefinedFlags) {
  const auto same = small_world_ratios(0.3, 0.3, 2.5, 2.5);
  EXPECT_DOUBLE_EQ(*same.sigma, 1.0);
  const auto zero = small_world_ratios(0.3, 0.0, 2.5, 2.5);
  EXPECT_FALSE(zero.acc_ratio.has_value());
  EXPECT_FALSE(zero.sigma.has_value());
  EXPECT_TRUE(zero.aspl_ratio.has_value());
  EXPECT_EQ(zero.undefined, (std::vector<std::string>{"random_acc_zero"}));
  const auto missing = small_world_ratios(0.3, 0.1, 2.5, std::nullopt);
  EXPECT_EQ(missing.undefined, (std::vector<std::string>{"random_aspl_missing"}));
  EXPECT_FALSE(missing.sigma.has_value());
}

TEST(SmallWorldCompare, RandomGraphAgainstItself) {
  AnalysisOptions options;
  options.plan.fraction = 0.25;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto real = erdos_renyi({1000, EdgeCount{10000}, true, 100 + seed});
    const auto report = small_world_compare(real, options, seed);
    ASSERT_TRUE(report.ratios.sigma.has_value());
    EXPECT_GT(*report.ratios.sigma, 0.5);
    EXPECT_LT(*report.ratios.sigma, 2.0);
    EXPECT_EQ(report.random.arcs, real.arc_count());
  }
}

TEST(SmallWorldCompare, WattsStrogatzIsSmallWorld) {
  AnalysisOptions options;
  options.plan.fraction = 0.25;
  const auto report = small_world_compare(watts_strogatz(2000, 10, 0.1, 5), options, 5);
  ASSERT_TRUE(report.ratios.sigma.has_value());
  EXPECT_GT(*report.ratios.sigma, 5.0);
}

TEST(SmallWorldCompare, TrianglelessRandomSideIsFlagged) {
  DirectedGraph pair;
  pair.add_nodes(2);
  pair.add_arc(0, 1);
  AnalysisOptions options;
  options.plan.fraction = 1.0;
  const auto report = small_world_compare(pair, options, 1);
  EXPECT_FALSE(report.ratios.sigma.has_value());
  EXPECT_EQ(report.ratios.undefined, (std::vector<std::string>{"random_acc_zero"}));
  const auto j = to_json(report);
  EXPECT_TRUE(j.at("sigma").is_null());
  EXPECT_TRUE(j.at("acc_ratio").is_null());
  EXPECT_DOUBLE_EQ(j.at("aspl_ratio").get<double>(), 1.0);
}
