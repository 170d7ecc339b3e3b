#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ledgergraph/metrics.hpp"
#include "ledgergraph/nullmodel.hpp"
#include "oracles.hpp"

using namespace ledgergraph;

namespace {

DirectedGraph from_arcs(std::size_t n, const std::vector<Arc>& arcs) {
  DirectedGraph g;
  g.add_nodes(n);
  for (auto [a, b] : arcs) g.add_arc(a, b);
  return g;
}

DirectedGraph cycle3() { return from_arcs(3, {{0, 1}, {1, 2}, {2, 0}}); }

DirectedGraph star(std::size_t leaves, bool both_ways) {
  std::vector<Arc> arcs;
  for (NodeId v = 1; v <= leaves; ++v) {
    arcs.emplace_back(0, v);
    if (both_ways) arcs.emplace_back(v, 0);
  }
  return from_arcs(leaves + 1, arcs);
}

SamplePlan exact() {
  SamplePlan p;
  p.fraction = 1.0;
  return p;
}

DirectedGraph random_digraph(std::mt19937_64& rng, std::size_t n, double p) {
  return erdos_renyi({n, EdgeProbability{p}, true, rng()});
}

}  // namespace

TEST(Degrees, ThreeCycle) {
  const auto d = node_degrees(CompactGraph(cycle3()));
  for (NodeId v = 0; v < 3; ++v) {
    EXPECT_EQ(d.in[v], 1U);
    EXPECT_EQ(d.out[v], 1U);
    EXPECT_EQ(d.total[v], 2U);
  }
}

TEST(Degrees, Star) {
  const auto h = degree_distribution(star(4, false));
  EXPECT_EQ(h.out_degree, (std::map<std::size_t, std::size_t>{{0, 4}, {4, 1}}));
  EXPECT_EQ(h.in_degree, (std::map<std::size_t, std::size_t>{{0, 1}, {1, 4}}));
  EXPECT_EQ(h.total_degree, (std::map<std::size_t, std::size_t>{{1, 4}, {4, 1}}));
  ASSERT_FALSE(h.max_hubs.empty());
  EXPECT_EQ(h.max_hubs.front(), (std::pair<NodeId, std::size_t>{0, 4}));
}

TEST(Degrees, MutualPairCountsOneNeighbor) {
  const auto d = node_degrees(CompactGraph(from_arcs(2, {{0, 1}, {1, 0}})));
  EXPECT_EQ(d.total[0], 1U);
  EXPECT_EQ(d.total[1], 1U);
}

TEST(Degrees, HandshakeSumsOnRandomGraphs) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_digraph(rng, 20 + trial * 5, 0.05);
    const auto h = degree_distribution(g);
    std::size_t in_sum = 0, out_sum = 0, nodes = 0;
    for (auto [d, c] : h.in_degree) in_sum += d * c;
    for (auto [d, c] : h.out_degree) out_sum += d * c;
    for (auto [d, c] : h.total_degree) nodes += c;
    EXPECT_EQ(in_sum, g.arc_count());
    EXPECT_EQ(out_sum, g.arc_count());
    EXPECT_EQ(nodes, g.node_count());
  }
}

TEST(Degrees, TableFormat) {
  std::ostringstream out;
  write_degree_table(out, {{1, 4}, {4, 1}});
  EXPECT_EQ(out.str(), "# degree count\n1 4\n4 1\n");
}

TEST(Clustering, Triangle) {
  const auto g = cycle3();
  for (NodeId v = 0; v < 3; ++v) EXPECT_DOUBLE_EQ(clustering_coefficient(g, v), 1.0);
  EXPECT_DOUBLE_EQ(average_clustering(g), 1.0);
}

TEST(Clustering, Path) {
  const auto g = from_arcs(3, {{0, 1}, {1, 2}});
  EXPECT_DOUBLE_EQ(clustering_coefficient(g, 1), 0.0);
  EXPECT_DOUBLE_EQ(average_clustering(g), 0.0);
}

TEST(Clustering, FourCliqueMinusOneEdge) {
  // missing edge 2–3: nodes 0 and 1 have degree 3, nodes 2 and 3 degree 2
  const std::vector<Arc> arcs{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}};
  const auto g = from_arcs(4, arcs);
  EXPECT_DOUBLE_EQ(clustering_coefficient(g, 0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(clustering_coefficient(g, 1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(clustering_coefficient(g, 2), 1.0);
  EXPECT_DOUBLE_EQ(clustering_coefficient(g, 3), 1.0);
  EXPECT_DOUBLE_EQ(oracle::average_clustering(4, arcs), 5.0 / 6.0);
  EXPECT_NEAR(average_clustering(g), 5.0 / 6.0, 1e-15);
}

TEST(Clustering, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_digraph(rng, 10 + trial * 4, 0.02 + 0.01 * (trial % 8));
    const double want = oracle::average_clustering(g.node_count(), g.sorted_arcs());
    const double got = average_clustering(g);
    EXPECT_NEAR(got, want, 1e-12 * std::max(1.0, want));
  }
}

TEST(Clustering, DirectedModeStaysInRange) {
  std::mt19937_64 rng(8);
  const auto g = random_digraph(rng, 80, 0.08);
  for (double c : clustering_coefficients(CompactGraph(g), ClusteringMode::directed)) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
  // a mutual triangle is fully clustered in either mode
  const auto full = undirected_projection(cycle3());
  EXPECT_DOUBLE_EQ(average_clustering(full, ClusteringMode::directed), 1.0);
}

TEST(Aspl, DirectedThreeCycle) {
  const auto r = aspl(cycle3(), exact());
  ASSERT_TRUE(r.aspl.has_value());
  EXPECT_DOUBLE_EQ(*r.aspl, 1.5);
  EXPECT_EQ(r.pairs_used, 6U);
}

TEST(Aspl, PathExcludesUnreachablePairs) {
  const auto r = aspl(from_arcs(3, {{0, 1}, {1, 2}}), exact());
  ASSERT_TRUE(r.aspl.has_value());
  EXPECT_DOUBLE_EQ(*r.aspl, 4.0 / 3.0);
  EXPECT_EQ(r.pairs_used, 3U);
  EXPECT_EQ(r.distance_sum, 4U);
}

TEST(Aspl, UndirectedAndStrongVariants) {
  auto plan = exact();
  plan.treat_as_undirected = true;
  EXPECT_DOUBLE_EQ(*aspl(from_arcs(3, {{0, 1}, {1, 2}}), plan).aspl, 8.0 / 6.0);
  plan = exact();
  plan.component = ComponentChoice::strong_main;
  const auto r = aspl(from_arcs(5, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 4}}), plan);
  EXPECT_EQ(r.component_size, 2U);
  EXPECT_DOUBLE_EQ(*r.aspl, 1.0);
}

TEST(Aspl, MatchesFloydWarshallExactly) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_digraph(rng, 10 + trial * 4, 0.03 + 0.01 * (trial % 5));
    const auto want = oracle::all_pairs_aspl(g.node_count(), g.sorted_arcs());
    const auto got = aspl(g, exact());
    if (want.pairs == 0) {
      EXPECT_FALSE(got.aspl.has_value());
      continue;
    }
    EXPECT_EQ(got.distance_sum, want.sum);
    EXPECT_EQ(got.pairs_used, want.pairs);
    EXPECT_EQ(*got.aspl, want.value());
  }
}

TEST(Aspl, ContractViolations) {
  SamplePlan plan;
  plan.fraction = 0.0;
  EXPECT_THROW(aspl(cycle3(), plan), ContractError);
  plan.fraction = 1.5;
  EXPECT_THROW(aspl(cycle3(), plan), ContractError);
  EXPECT_THROW(aspl(from_arcs(1, {}), exact()), ContractError);
  EXPECT_THROW(aspl(cycle3(), exact(), 0), ContractError);
}

TEST(Aspl, SampleSizeRule) {
  EXPECT_EQ(sample_size(3, 0.10), 2U);
  EXPECT_EQ(sample_size(1000, 0.10), 100U);
  EXPECT_EQ(sample_size(1001, 0.10), 101U);
  EXPECT_EQ(sample_size(1, 0.5), 1U);
  const auto s = sample_indices(100, 10, 5);
  EXPECT_EQ(s, sample_indices(100, 10, 5));
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
}

TEST(Aspl, SameResultForAnyWorkerCount) {
  const auto g = erdos_renyi({3000, EdgeCount{9000}, true, 3});
  SamplePlan plan;
  plan.fraction = 0.2;
  plan.seed = 12;
  const auto one = aspl(g, plan, 1);
  for (unsigned w : {2U, 3U, 8U}) {
    const auto many = aspl(g, plan, w);
    EXPECT_EQ(many.distance_sum, one.distance_sum);
    EXPECT_EQ(many.pairs_used, one.pairs_used);
  }
}

TEST(Load, StarCenterCarriesEverything) {
  const std::vector<NodeId> q{0, 1};
  const auto loads = load_centrality(star(5, true), q);
  EXPECT_DOUBLE_EQ(loads[0], 1.0);
  EXPECT_DOUBLE_EQ(loads[1], 0.0);
}

TEST(Load, DirectedThreeCycle) {
  const std::vector<NodeId> q{0, 1, 2};
  for (double l : load_centrality(cycle3(), q)) EXPECT_DOUBLE_EQ(l, 0.5);
}

TEST(Load, OutwardStarLeavesAndCenter) {
  const std::vector<NodeId> q{0, 3};
  const auto loads = load_centrality(star(4, false), q);
  EXPECT_DOUBLE_EQ(loads[0], 0.0);
  EXPECT_DOUBLE_EQ(loads[1], 0.0);
}

TEST(Load, MatchesPathEnumeration) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 6 + trial;
    const auto g = random_digraph(rng, n, 0.12);
    std::vector<NodeId> all(n);
    std::iota(all.begin(), all.end(), NodeId{0});
    const auto got = load_centrality(g, all, 1 + trial % 3);
    for (NodeId v = 0; v < n; ++v)
      EXPECT_NEAR(got[v], oracle::enumerated_load(n, g.sorted_arcs(), v), 1e-12) << "trial " << trial << " node " << v;
  }
}

TEST(Load, TotalMassEqualsExcessPathLength) {
  // Every connected pair at distance d passes d-1 interior nodes.
  std::mt19937_64 rng(31);
  const auto g = random_digraph(rng, 60, 0.06);
  const auto part = weak_partition(CompactGraph(g));
  ASSERT_EQ(part.components.size(), 1U);
  const std::size_t n = g.node_count();
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  double mass = 0.0;
  for (double l : load_centrality(g, all)) mass += l * static_cast<double>((n - 1) * (n - 2));
  const auto totals = oracle::all_pairs_aspl(n, g.sorted_arcs());
  EXPECT_NEAR(mass, static_cast<double>(totals.sum - totals.pairs), 1e-6);
}

TEST(Load, WorkerCountDoesNotChangeBits) {
  const auto g = erdos_renyi({500, EdgeCount{2500}, true, 4});
  const std::vector<NodeId> q{0, 7, 99, 250};
  const auto one = load_centrality(g, q, 1);
  EXPECT_EQ(load_centrality(g, q, 4), one);
}

TEST(Analyze, TriangleReport) {
  AnalysisOptions options;
  options.plan.fraction = 1.0;
  const auto r = analyze(cycle3(), options);
  EXPECT_DOUBLE_EQ(r.graph_acc, 1.0);
  EXPECT_DOUBLE_EQ(r.main_component_acc, 1.0);
  EXPECT_DOUBLE_EQ(*r.main_component_aspl.aspl, 1.5);
  EXPECT_EQ(r.component_sizes.weak_main, 3U);
  EXPECT_EQ(r.component_sizes.strong_main, 3U);
  ASSERT_EQ(r.hub_load.size(), 3U);
  EXPECT_DOUBLE_EQ(r.hub_load[0].load, 0.5);
  const auto j = to_json(r);
  EXPECT_EQ(j.at("main_component_aspl").get<double>(), 1.5);
  EXPECT_FALSE(j.contains("timings_seconds"));
  EXPECT_TRUE(to_json(r, true).contains("timings_seconds"));
}

TEST(Analyze, JsonIsIdenticalAcrossWorkers) {
  const auto g = erdos_renyi({2000, EdgeCount{8000}, true, 9});
  AnalysisOptions options;
  options.plan.seed = 3;
  options.workers = 1;
  const auto one = to_json(analyze(g, options)).dump();
  options.workers = 6;
  EXPECT_EQ(to_json(analyze(g, options)).dump(), one);
}

TEST(FrozenReference, ThreeLinkedCyclesWithAPendantPair) {
  // values computed once with an independent graph library and frozen here
  const auto g = from_arcs(12, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}, {1, 6},
                                {6, 7}, {7, 1}, {4, 8}, {8, 9}, {9, 4}, {0, 9}, {10, 11}});
  EXPECT_NEAR(average_clustering(g), 0.5, 1e-15);
  const auto r = aspl(g, exact());
  EXPECT_EQ(r.distance_sum, 170U);
  EXPECT_EQ(r.pairs_used, 65U);
  std::vector<NodeId> nodes(10);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  const auto loads = load_centrality(g, nodes);
  const double expected_72ths[] = {7, 21, 19, 15, 20, 3, 3, 8, 3, 6};
  for (NodeId v = 0; v < 10; ++v) EXPECT_NEAR(loads[v], expected_72ths[v] / 72.0, 1e-12) << "node " << v;
}
