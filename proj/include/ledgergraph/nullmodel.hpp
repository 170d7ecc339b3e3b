#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ledgergraph/error.hpp"
#include "ledgergraph/graph.hpp"
#include "ledgergraph/metrics.hpp"

namespace ledgergraph {

struct EdgeCount {
  std::uint64_t value = 0;
};
struct EdgeProbability {
  double value = 0.0;
};

/// Erdős–Rényi parameters: G(n, m) with an exact arc count, or G(n, p).
struct RandomGraphSpec {
  std::size_t node_count = 0;
  std::variant<EdgeCount, EdgeProbability> target = EdgeCount{};
  bool directed = true;
  std::uint64_t seed = 0;
};

namespace detail {

// Slot i of the non-loop ordered pairs (directed) or unordered pairs a < b.
inline Arc pair_at(std::uint64_t index, std::uint64_t n, bool directed) {
  if (directed) {
    const auto src = static_cast<NodeId>(index / (n - 1));
    const auto r = static_cast<NodeId>(index % (n - 1));
    return {src, r < src ? r : r + 1};
  }
  // row a holds pairs (a, a+1..n-1); walk rows with a closed-form start
  const double nd = static_cast<double>(n);
  auto a = static_cast<std::uint64_t>(
      std::floor(nd - 0.5 - std::sqrt((nd - 0.5) * (nd - 0.5) - 2.0 * static_cast<double>(index))));
  auto row_start = [n](std::uint64_t row) { return row * (2 * n - row - 1) / 2; };
  while (a > 0 && row_start(a) > index) --a;
  while (row_start(a + 1) <= index) ++a;
  return {static_cast<NodeId>(a), static_cast<NodeId>(a + 1 + (index - row_start(a)))};
}

inline void add_pair(DirectedGraph& g, Arc arc, bool directed) {
  g.add_arc(arc.first, arc.second);
  if (!directed) g.add_arc(arc.second, arc.first);
}

}  // namespace detail

inline std::uint64_t pair_slots(std::size_t n, bool directed) {
  const auto nn = static_cast<std::uint64_t>(n);
  return n < 2 ? 0 : (directed ? nn * (nn - 1) : nn * (nn - 1) / 2);
}

/// Seeded Erdős–Rényi graph without self-loops. In edge-count mode exactly m
/// distinct pairs are drawn uniformly without replacement; in probability
/// mode every pair is kept independently with probability p. Undirected
/// graphs store each edge as two arcs.
inline DirectedGraph erdos_renyi(const RandomGraphSpec& spec) {
  const std::uint64_t slots = pair_slots(spec.node_count, spec.directed);
  DirectedGraph g;
  g.add_nodes(spec.node_count);
  std::mt19937_64 rng(spec.seed);

  if (const auto* count = std::get_if<EdgeCount>(&spec.target)) {
    const std::uint64_t m = count->value;
    if (m > slots) {
      throw ContractError("erdos_renyi: " + std::to_string(m) + " edges exceed the " + std::to_string(slots) +
                          " available pairs");
    }
    if (m == 0) return g;
    std::uniform_int_distribution<std::uint64_t> pick(0, slots - 1);
    // Collision-retry draws; for dense targets draw the excluded pairs instead.
    const bool complement = m > slots / 2;
    const std::uint64_t draws = complement ? slots - m : m;
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(draws * 2));
    std::vector<std::uint64_t> order;
    order.reserve(static_cast<std::size_t>(draws));
    while (chosen.size() < draws) {
      const std::uint64_t idx = pick(rng);
      if (chosen.insert(idx).second) order.push_back(idx);
    }
    if (complement) {
      for (std::uint64_t idx = 0; idx < slots; ++idx)
        if (!chosen.contains(idx)) detail::add_pair(g, detail::pair_at(idx, spec.node_count, spec.directed), spec.directed);
    } else {
      for (std::uint64_t idx : order) detail::add_pair(g, detail::pair_at(idx, spec.node_count, spec.directed), spec.directed);
    }
    return g;
  }

  const double p = std::get<EdgeProbability>(spec.target).value;
  if (!(p >= 0.0 && p <= 1.0)) throw ContractError("erdos_renyi: probability must lie in [0, 1]");
  if (p == 0.0 || slots == 0) return g;
  if (p == 1.0) {
    for (std::uint64_t idx = 0; idx < slots; ++idx)
      detail::add_pair(g, detail::pair_at(idx, spec.node_count, spec.directed), spec.directed);
    return g;
  }
  // Geometric skipping over the pair slots.
  std::geometric_distribution<std::uint64_t> skip(p);
  for (std::uint64_t idx = skip(rng); idx < slots; idx += 1 + skip(rng))
    detail::add_pair(g, detail::pair_at(idx, spec.node_count, spec.directed), spec.directed);
  return g;
}

/// Watts–Strogatz small-world graph: ring lattice of n nodes each joined to
/// its k nearest neighbors (k even), every lattice edge rewired with
/// probability beta. Edges are stored as arc pairs in both directions.
inline DirectedGraph watts_strogatz(std::size_t n, std::size_t k, double beta, std::uint64_t seed) {
  if (k % 2 != 0 || k >= n) throw ContractError("watts_strogatz: k must be even and smaller than n");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ContractError("watts_strogatz: beta must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  std::vector<std::unordered_set<NodeId>> adj(n);
  auto link = [&](std::size_t a, std::size_t b) {
    adj[a].insert(static_cast<NodeId>(b));
    adj[b].insert(static_cast<NodeId>(a));
  };
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t j = 1; j <= k / 2; ++j) link(v, (v + j) % n);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      const auto v = static_cast<NodeId>((u + j) % n);
      if (coin(rng) >= beta || !adj[u].contains(v)) continue;
      if (adj[u].size() >= n - 1) continue;
      std::size_t w;
      do {
        w = any(rng);
      } while (w == u || adj[u].contains(static_cast<NodeId>(w)));
      adj[u].erase(v);
      adj[v].erase(static_cast<NodeId>(u));
      link(u, w);
    }
  }
  DirectedGraph g;
  g.add_nodes(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<NodeId> nbrs(adj[v].begin(), adj[v].end());
    std::sort(nbrs.begin(), nbrs.end());
    for (NodeId w : nbrs) g.add_arc(static_cast<NodeId>(v), w);
  }
  return g;
}

// ---------------------------------------------------------------------------
// small-world verdict

/// C/C_r, L/L_r and σ = (C/C_r)/(L/L_r). A ratio is left empty, with the
/// cause listed in `undefined`, when an input is missing, zero or not finite.
struct SmallWorldRatios {
  std::optional<double> acc_ratio;
  std::optional<double> aspl_ratio;
  std::optional<double> sigma;
  std::vector<std::string> undefined;
};

inline SmallWorldRatios small_world_ratios(double acc, double random_acc, std::optional<double> aspl,
                                           std::optional<double> random_aspl) {
  SmallWorldRatios r;
  auto usable = [](std::optional<double> x) { return x && std::isfinite(*x) && *x != 0.0; };
  if (!std::isfinite(acc)) {
    r.undefined.emplace_back("acc_not_finite");
  } else if (!usable(random_acc)) {
    r.undefined.emplace_back("random_acc_zero");
  } else {
    r.acc_ratio = acc / random_acc;
  }
  if (!usable(aspl)) {
    r.undefined.emplace_back(aspl ? "aspl_zero" : "aspl_missing");
  } else if (!usable(random_aspl)) {
    r.undefined.emplace_back(random_aspl ? "random_aspl_zero" : "random_aspl_missing");
  } else {
    r.aspl_ratio = *aspl / *random_aspl;
  }
  if (r.acc_ratio && r.aspl_ratio) r.sigma = *r.acc_ratio / *r.aspl_ratio;
  return r;
}

struct SmallWorldReport {
  MetricsReport real;
  MetricsReport random;
  SmallWorldRatios ratios;
  std::uint64_t random_seed = 0;
  std::vector<std::pair<std::string, double>> phase_seconds;
};

/// Compares `real` against a directed G(n, m) graph with the same node and
/// arc counts, measured with identical options.
inline SmallWorldReport small_world_compare(const DirectedGraph& real, const AnalysisOptions& options,
                                            std::uint64_t seed) {
  if (real.node_count() == 0) throw ContractError("small_world_compare: real graph is empty");
  SmallWorldReport report;
  report.random_seed = seed;
  using clock = std::chrono::steady_clock;
  auto lap = [&, last = clock::now()](std::string name) mutable {
    const auto now = clock::now();
    report.phase_seconds.emplace_back(std::move(name), std::chrono::duration<double>(now - last).count());
    last = now;
  };

  report.real = analyze(real, options);
  lap("real_metrics");
  const DirectedGraph random =
      erdos_renyi({real.node_count(), EdgeCount{real.arc_count()}, /*directed=*/true, seed});
  lap("random_generation");
  report.random = analyze(random, options);
  lap("random_metrics");
  report.ratios = small_world_ratios(report.real.graph_acc, report.random.graph_acc,
                                     report.real.main_component_aspl.aspl, report.random.main_component_aspl.aspl);
  return report;
}

inline nlohmann::json to_json(const SmallWorldRatios& r) {
  return {{"acc_ratio", detail::optional_number(r.acc_ratio)},
          {"aspl_ratio", detail::optional_number(r.aspl_ratio)},
          {"sigma", detail::optional_number(r.sigma)},
          {"undefined", r.undefined}};
}

inline nlohmann::json to_json(const SmallWorldReport& r, bool include_timings = false) {
  nlohmann::json j{{"real", to_json(r.real, include_timings)},
                   {"random", to_json(r.random, include_timings)},
                   {"random_graph", {{"model", "gnm"}, {"directed", true}, {"seed", r.random_seed}}},
                   {"sample_seed", r.real.sample_plan.seed}};
  const auto ratios = to_json(r.ratios);
  for (const auto& [key, value] : ratios.items()) j[key] = value;
  if (include_timings) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [phase, seconds] : r.phase_seconds) t[phase] = seconds;
    j["timings_seconds"] = std::move(t);
  }
  return j;
}

}  // namespace ledgergraph
