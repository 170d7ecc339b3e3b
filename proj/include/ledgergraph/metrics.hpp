#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ledgergraph/error.hpp"
#include "ledgergraph/graph.hpp"
#include "ledgergraph/parallel.hpp"

namespace ledgergraph {

// ---------------------------------------------------------------------------
// degrees

struct NodeDegrees {
  std::vector<std::uint32_t> in;
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> total;  // distinct neighbors, in ∪ out
};

inline NodeDegrees node_degrees(const CompactGraph& g) {
  const std::size_t n = g.node_count();
  NodeDegrees d{std::vector<std::uint32_t>(n), std::vector<std::uint32_t>(n), std::vector<std::uint32_t>(n)};
  for (NodeId v = 0; v < n; ++v) {
    auto succ = g.successors(v);
    auto pred = g.predecessors(v);
    d.out[v] = static_cast<std::uint32_t>(succ.size());
    d.in[v] = static_cast<std::uint32_t>(pred.size());
    // both lists are sorted, so |succ ∪ pred| is a merge count
    std::size_t i = 0, j = 0, both = 0;
    while (i < succ.size() && j < pred.size()) {
      if (succ[i] < pred[j]) {
        ++i;
      } else if (pred[j] < succ[i]) {
        ++j;
      } else {
        ++both;
        ++i;
        ++j;
      }
    }
    d.total[v] = static_cast<std::uint32_t>(succ.size() + pred.size() - both);
  }
  return d;
}

struct DegreeHistogram {
  std::map<std::size_t, std::size_t> in_degree;  // degree -> node count
  std::map<std::size_t, std::size_t> out_degree;
  std::map<std::size_t, std::size_t> total_degree;
  std::vector<std::pair<NodeId, std::size_t>> max_hubs;  // (node, total degree), descending
};

// Hubs are the `hub_count` nodes of highest total degree, lower id first on ties.
inline DegreeHistogram degree_distribution(const CompactGraph& g, std::size_t hub_count = 10) {
  const auto d = node_degrees(g);
  DegreeHistogram h;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    ++h.in_degree[d.in[v]];
    ++h.out_degree[d.out[v]];
    ++h.total_degree[d.total[v]];
  }
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  const std::size_t k = std::min(hub_count, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](NodeId a, NodeId b) { return d.total[a] != d.total[b] ? d.total[a] > d.total[b] : a < b; });
  for (std::size_t i = 0; i < k; ++i) h.max_hubs.emplace_back(order[i], d.total[order[i]]);
  return h;
}

inline DegreeHistogram degree_distribution(const DirectedGraph& g, std::size_t hub_count = 10) {
  return degree_distribution(CompactGraph(g), hub_count);
}

// `degree count` rows for log-log plotting.
inline void write_degree_table(std::ostream& out, const std::map<std::size_t, std::size_t>& table) {
  out << "# degree count\n";
  for (auto [degree, count] : table) out << degree << ' ' << count << '\n';
}

// ---------------------------------------------------------------------------
// clustering

enum class ClusteringMode { undirected, directed };

namespace detail {

// Triangles through each node of a symmetric graph, by the degree-ordered
// forward algorithm: each triangle is found once from its lowest-ranked vertex.
inline std::vector<std::uint64_t> triangles_per_node(const CompactGraph& sym) {
  const std::size_t n = sym.node_count();
  auto higher = [&](NodeId a, NodeId b) {
    const auto da = sym.out_degree(a), db = sym.out_degree(b);
    return da != db ? da > db : a > b;
  };
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<NodeId> forward;
  forward.reserve(sym.arc_count() / 2);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : sym.successors(u))
      if (higher(v, u)) forward.push_back(v);
    offsets[u + 1] = forward.size();
  }
  std::vector<std::uint64_t> tri(n, 0);
  std::vector<char> mark(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    const auto begin = forward.begin() + static_cast<std::ptrdiff_t>(offsets[u]);
    const auto end = forward.begin() + static_cast<std::ptrdiff_t>(offsets[u + 1]);
    for (auto it = begin; it != end; ++it) mark[*it] = 1;
    for (auto it = begin; it != end; ++it) {
      const NodeId v = *it;
      for (std::size_t p = offsets[v]; p < offsets[v + 1]; ++p) {
        const NodeId w = forward[p];
        if (mark[w]) {
          ++tri[u];
          ++tri[v];
          ++tri[w];
        }
      }
    }
    for (auto it = begin; it != end; ++it) mark[*it] = 0;
  }
  return tri;
}

// Directed clustering over all triangle orientations, normalized by
// d_tot(d_tot − 1) − 2 d_recip.
inline std::vector<double> directed_clustering(const CompactGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> c(n, 0.0);
  std::vector<std::uint32_t> weight(n, 0);  // a_vj + a_jv for neighbors j of v
  for (NodeId v = 0; v < n; ++v) {
    const auto succ = g.successors(v), pred = g.predecessors(v);
    for (NodeId j : succ) ++weight[j];
    for (NodeId j : pred) ++weight[j];
    std::uint64_t reciprocal = 0;
    for (NodeId j : succ)
      if (weight[j] == 2) ++reciprocal;
    double t = 0.0;
    auto scan = [&](NodeId j) {
      for (NodeId h : g.successors(j))
        if (h != v && weight[h] != 0) t += static_cast<double>(weight[j]) * weight[h];
    };
    for (NodeId j : succ) scan(j);
    for (NodeId j : pred)
      if (weight[j] == 1) scan(j);  // reciprocal neighbors were already scanned via succ
    const double total = static_cast<double>(succ.size() + pred.size());
    const double denom = total * (total - 1.0) - 2.0 * static_cast<double>(reciprocal);
    c[v] = denom > 0 ? t / denom : 0.0;
    for (NodeId j : succ) weight[j] = 0;
    for (NodeId j : pred) weight[j] = 0;
  }
  return c;
}

}  // namespace detail

/// Local clustering coefficient of every node. In the default undirected
/// mode a node with k distinct neighbors scores 2·(links among them)/(k(k−1)),
/// and 0 when k < 2.
inline std::vector<double> clustering_coefficients(const CompactGraph& g,
                                                   ClusteringMode mode = ClusteringMode::undirected) {
  if (mode == ClusteringMode::directed) return detail::directed_clustering(g);
  const CompactGraph sym = g.symmetrized();
  const auto tri = detail::triangles_per_node(sym);
  std::vector<double> c(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const double k = static_cast<double>(sym.out_degree(v));
    if (k >= 2) c[v] = 2.0 * static_cast<double>(tri[v]) / (k * (k - 1.0));
  }
  return c;
}

// Mean over all nodes, summed in node order; 0 for an empty graph.
inline double average_clustering(const CompactGraph& g, ClusteringMode mode = ClusteringMode::undirected) {
  if (g.node_count() == 0) return 0.0;
  const auto c = clustering_coefficients(g, mode);
  double sum = 0.0;
  for (double x : c) sum += x;
  return sum / static_cast<double>(c.size());
}

inline double average_clustering(const DirectedGraph& g, ClusteringMode mode = ClusteringMode::undirected) {
  return average_clustering(CompactGraph(g), mode);
}

inline double clustering_coefficient(const DirectedGraph& g, NodeId node,
                                     ClusteringMode mode = ClusteringMode::undirected) {
  if (node >= g.node_count()) throw ContractError("clustering_coefficient: node out of range");
  return clustering_coefficients(CompactGraph(g), mode)[node];
}

// ---------------------------------------------------------------------------
// shortest paths

enum class ComponentChoice { weak_main, strong_main };

/// Which nodes the average shortest path is measured on.
struct SamplePlan {
  double fraction = 0.10;  // in (0, 1]
  std::uint64_t seed = 0;
  ComponentChoice component = ComponentChoice::weak_main;
  bool treat_as_undirected = false;
};

// ⌈fraction·size⌉, but never fewer than two nodes (or the whole component if smaller).
inline std::size_t sample_size(std::size_t population, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ContractError("sample fraction must lie in (0, 1]");
  const auto wanted = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(population) - 1e-9));
  return std::min(population, std::max<std::size_t>(2, wanted));
}

// Uniform sample without replacement of `count` indices from [0, population), ascending.
inline std::vector<NodeId> sample_indices(std::size_t population, std::size_t count, std::uint64_t seed) {
  std::vector<NodeId> all(population);
  std::iota(all.begin(), all.end(), NodeId{0});
  if (count >= population) return all;
  std::vector<NodeId> picked;
  picked.reserve(count);
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);
  return picked;
}

struct AsplResult {
  std::optional<double> aspl;  // empty when no sampled pair is connected
  std::uint64_t pairs_used = 0;
  std::uint64_t distance_sum = 0;
  std::size_t sample_size = 0;
  std::size_t component_size = 0;
};

namespace detail {

// The selected main component as a standalone graph (projected when requested).
inline CompactGraph main_component_graph(const CompactGraph& g, ComponentChoice choice, bool undirected) {
  const auto part = choice == ComponentChoice::weak_main ? weak_partition(g) : strong_partition(g);
  if (part.components.empty()) return {};
  CompactGraph sub = g.induced(part.main().members);
  return undirected ? sub.symmetrized() : sub;
}

inline void check_workers(unsigned workers) {
  if (workers < 1) throw ContractError("worker count must be at least 1");
}

}  // namespace detail

// Breadth-first shortest paths from a node sample of one connected piece.
// Distances are averaged over ordered sampled pairs (s, t), s ≠ t, with t
// reachable from s.
inline AsplResult sampled_aspl(const CompactGraph& component, double fraction, std::uint64_t seed,
                               unsigned workers = 1) {
  detail::check_workers(workers);
  const std::size_t n = component.node_count();
  if (n < 2) throw ContractError("aspl: main component needs at least two nodes");
  const auto sample = sample_indices(n, sample_size(n, fraction), seed);
  if (sample.empty()) throw ContractError("aspl: empty sample");
  std::vector<char> in_sample(n, 0);
  for (NodeId s : sample) in_sample[s] = 1;

  struct Partial {
    std::uint64_t sum = 0;
    std::uint64_t pairs = 0;
  };
  std::vector<Partial> partial(sample.size());
  struct Scratch {
    std::vector<std::uint32_t> dist;
    std::vector<NodeId> queue;
  };
  std::vector<Scratch> scratch(std::max(1U, workers));
  constexpr std::uint32_t unreached = std::numeric_limits<std::uint32_t>::max();

  parallel_for(sample.size(), workers, [&](std::size_t i, unsigned w) {
    auto& [dist, queue] = scratch[w];
    if (dist.size() != n) dist.assign(n, unreached);
    queue.clear();
    const NodeId s = sample[i];
    dist[s] = 0;
    queue.push_back(s);
    Partial p;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      const std::uint32_t next = dist[v] + 1;
      for (NodeId u : component.successors(v)) {
        if (dist[u] != unreached) continue;
        dist[u] = next;
        queue.push_back(u);
        if (in_sample[u]) {
          p.sum += next;
          ++p.pairs;
        }
      }
    }
    for (NodeId v : queue) dist[v] = unreached;
    partial[i] = p;
  });

  AsplResult r;
  r.sample_size = sample.size();
  r.component_size = n;
  for (const auto& p : partial) {
    r.distance_sum += p.sum;
    r.pairs_used += p.pairs;
  }
  if (r.pairs_used > 0) r.aspl = static_cast<double>(r.distance_sum) / static_cast<double>(r.pairs_used);
  return r;
}

/// Average shortest path length of the main component chosen by `plan`.
/// fraction = 1 gives the exact value over all connected ordered pairs.
inline AsplResult aspl(const CompactGraph& g, const SamplePlan& plan, unsigned workers = 1) {
  const CompactGraph main = detail::main_component_graph(g, plan.component, plan.treat_as_undirected);
  return sampled_aspl(main, plan.fraction, plan.seed, workers);
}

inline AsplResult aspl(const DirectedGraph& g, const SamplePlan& plan, unsigned workers = 1) {
  return aspl(CompactGraph(g), plan, workers);
}

// ---------------------------------------------------------------------------
// load centrality

namespace detail {

// Unnormalized through-path mass of `queries` (local ids) inside one weakly
// connected piece: each ordered pair (s, t) contributes 1, split equally
// over its shortest paths.
inline std::vector<double> path_load(const CompactGraph& piece, std::span<const NodeId> queries, unsigned workers) {
  const std::size_t n = piece.node_count();
  const std::size_t k = queries.size();
  std::vector<char> is_query(n, 0);
  for (NodeId q : queries) is_query[q] = 1;

  // Only sources with a path to some query can route anything through it.
  std::vector<char> reaches(n, 0);
  std::vector<NodeId> stack;
  for (NodeId q : queries)
    if (!reaches[q]) {
      reaches[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : piece.predecessors(v))
      if (!reaches[u]) {
        reaches[u] = 1;
        stack.push_back(u);
      }
  }
  std::vector<NodeId> sources;
  for (NodeId v = 0; v < n; ++v)
    if (reaches[v]) sources.push_back(v);

  std::vector<double> per_source(sources.size() * k, 0.0);
  struct Slot {
    double paths = 0.0;
    double dependency = 0.0;
    std::int32_t dist = -1;
  };
  struct Scratch {
    std::vector<Slot> slot;
    std::vector<NodeId> order;
  };
  std::vector<Scratch> scratch(std::max(1U, workers));

  parallel_for(sources.size(), workers, [&](std::size_t si, unsigned w) {
    auto& [slot, order] = scratch[w];
    if (slot.size() != n) slot.assign(n, Slot{});
    const NodeId s = sources[si];
    order.clear();
    slot[s].dist = 0;
    slot[s].paths = 1.0;
    order.push_back(s);
    std::int32_t shallowest_query = std::numeric_limits<std::int32_t>::max();
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId v = order[head];
      const Slot from = slot[v];
      if (is_query[v] && v != s) shallowest_query = std::min(shallowest_query, from.dist);
      for (NodeId u : piece.successors(v)) {
        Slot& to = slot[u];
        if (to.dist < 0) {
          to.dist = from.dist + 1;
          order.push_back(u);
        }
        if (to.dist == from.dist + 1) to.paths += from.paths;
      }
    }
    // nodes at or above the shallowest query only feed non-queries
    for (std::size_t i = order.size(); i-- > 1;) {
      const Slot& t = slot[order[i]];
      if (t.dist <= shallowest_query) break;
      const double share = (1.0 + t.dependency) / t.paths;
      for (NodeId v : piece.predecessors(order[i])) {
        Slot& up = slot[v];
        if (up.dist >= 0 && up.dist == t.dist - 1) up.dependency += up.paths * share;
      }
    }
    for (std::size_t j = 0; j < k; ++j)
      if (queries[j] != s && slot[queries[j]].dist >= 0) per_source[si * k + j] = slot[queries[j]].dependency;
    for (NodeId v : order) slot[v] = Slot{};
  });

  std::vector<double> load(k, 0.0);
  for (std::size_t si = 0; si < sources.size(); ++si)
    for (std::size_t j = 0; j < k; ++j) load[j] += per_source[si * k + j];
  return load;
}

}  // namespace detail

/// Fraction of shortest paths between ordered pairs of other nodes that run
/// through each queried node, following arc direction. Each pair's unit is
/// split equally over its shortest paths and the total is normalized by
/// (n−1)(n−2), n being the size of the node's weakly connected component.
inline std::vector<double> load_centrality(const CompactGraph& g, std::span<const NodeId> nodes,
                                           unsigned workers = 1) {
  detail::check_workers(workers);
  for (NodeId v : nodes)
    if (v >= g.node_count()) throw ContractError("load_centrality: node out of range");
  std::vector<double> result(nodes.size(), 0.0);
  if (nodes.empty()) return result;
  const auto part = weak_partition(g);
  std::map<std::uint32_t, std::vector<std::size_t>> by_component;  // component -> query positions
  for (std::size_t i = 0; i < nodes.size(); ++i) by_component[part.of_node[nodes[i]]].push_back(i);

  for (const auto& [comp, positions] : by_component) {
    const auto& members = part.components[comp].members;
    const std::size_t n = members.size();
    if (n < 3) continue;
    const CompactGraph piece = g.induced(members);
    std::vector<NodeId> local;
    for (std::size_t pos : positions) {
      const auto it = std::lower_bound(members.begin(), members.end(), nodes[pos]);
      local.push_back(static_cast<NodeId>(it - members.begin()));
    }
    const auto raw = detail::path_load(piece, local, workers);
    const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (std::size_t j = 0; j < positions.size(); ++j) result[positions[j]] = raw[j] * scale;
  }
  return result;
}

inline std::vector<double> load_centrality(const DirectedGraph& g, std::span<const NodeId> nodes,
                                           unsigned workers = 1) {
  return load_centrality(CompactGraph(g), nodes, workers);
}

// ---------------------------------------------------------------------------
// report

struct ComponentSizes {
  std::size_t weak_main = 0;
  std::size_t strong_main = 0;
  std::size_t weak_components = 0;
  std::size_t strong_components = 0;
  double weak_main_fraction = 0.0;
  double strong_main_fraction = 0.0;
};

struct HubLoad {
  NodeId node = 0;
  std::size_t degree = 0;
  double load = 0.0;
  std::string address;  // empty for unlabeled graphs
};

struct MetricsReport {
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  double graph_acc = 0.0;           // C of the small-world comparison
  double main_component_acc = 0.0;
  AsplResult main_component_aspl;   // L of the small-world comparison
  SamplePlan sample_plan;
  ClusteringMode clustering = ClusteringMode::undirected;
  ComponentSizes component_sizes;
  std::vector<HubLoad> hub_load;
  double edge_reuse_ratio = 0.0;
  DegreeHistogram degree_histogram;
  std::vector<std::pair<std::string, double>> phase_seconds;
};

struct AnalysisOptions {
  SamplePlan plan;
  unsigned workers = 1;
  std::size_t hub_count = 10;
  ClusteringMode clustering = ClusteringMode::undirected;
};

namespace detail {

class PhaseClock {
 public:
  explicit PhaseClock(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}
  void lap(std::string name) {
    const auto now = std::chrono::steady_clock::now();
    sink_.emplace_back(std::move(name), std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  std::vector<std::pair<std::string, double>>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// Full metric suite on one graph. `edge_reuse_ratio` is passed through to the
/// report since compact graphs do not keep arc multiplicities.
inline MetricsReport analyze(const CompactGraph& g, const AnalysisOptions& options, double edge_reuse_ratio = 0.0) {
  detail::check_workers(options.workers);
  MetricsReport r;
  detail::PhaseClock clock(r.phase_seconds);
  r.nodes = g.node_count();
  r.arcs = g.arc_count();
  r.sample_plan = options.plan;
  r.clustering = options.clustering;
  r.edge_reuse_ratio = edge_reuse_ratio;

  r.degree_histogram = degree_distribution(g, options.hub_count);
  clock.lap("degree_distribution");

  const auto weak = weak_partition(g);
  const auto strong = strong_partition(g);
  if (weak.components.empty()) throw ContractError("analyze: graph has no nodes");
  auto& cs = r.component_sizes;
  cs.weak_main = weak.main().members.size();
  cs.strong_main = strong.main().members.size();
  cs.weak_components = weak.components.size();
  cs.strong_components = strong.components.size();
  cs.weak_main_fraction = static_cast<double>(cs.weak_main) / static_cast<double>(r.nodes);
  cs.strong_main_fraction = static_cast<double>(cs.strong_main) / static_cast<double>(r.nodes);
  clock.lap("components");

  r.graph_acc = average_clustering(g, options.clustering);
  const auto& main_members =
      options.plan.component == ComponentChoice::weak_main ? weak.main().members : strong.main().members;
  const CompactGraph main = g.induced(main_members);
  r.main_component_acc = average_clustering(main, options.clustering);
  clock.lap("clustering");

  // A main component below two nodes has no paths; the ASPL stays empty.
  if (main.node_count() >= 2) {
    r.main_component_aspl = sampled_aspl(options.plan.treat_as_undirected ? main.symmetrized() : main,
                                         options.plan.fraction, options.plan.seed, options.workers);
  } else {
    sample_size(main.node_count(), options.plan.fraction);  // still reject a bad fraction
    r.main_component_aspl.component_size = main.node_count();
  }
  clock.lap("aspl");

  std::vector<NodeId> hubs;
  for (auto [v, deg] : r.degree_histogram.max_hubs) hubs.push_back(v);
  const auto loads = load_centrality(g, hubs, options.workers);
  for (std::size_t i = 0; i < hubs.size(); ++i)
    r.hub_load.push_back({hubs[i], r.degree_histogram.max_hubs[i].second, loads[i], {}});
  clock.lap("load_centrality");
  return r;
}

inline MetricsReport analyze(const DirectedGraph& g, const AnalysisOptions& options) {
  auto r = analyze(CompactGraph(g), options, g.edge_reuse_ratio());
  if (g.fully_labeled())
    for (auto& hub : r.hub_load) hub.address = g.label(hub.node);
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline std::string_view to_string(ComponentChoice c) {
  return c == ComponentChoice::weak_main ? "weak" : "strong";
}

inline std::string_view to_string(ClusteringMode m) {
  return m == ClusteringMode::undirected ? "undirected" : "directed";
}

namespace detail {

inline nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace detail

// Fixed-field report document; timings only when asked for, so that reports
// from identical inputs are byte-identical.
inline nlohmann::json to_json(const MetricsReport& r, bool include_timings = false) {
  const auto& cs = r.component_sizes;
  nlohmann::json hubs = nlohmann::json::array();
  for (const auto& h : r.hub_load) {
    nlohmann::json entry{{"node", h.node}, {"degree", h.degree}, {"load", h.load}};
    if (!h.address.empty()) entry["address"] = h.address;
    hubs.push_back(std::move(entry));
  }
  nlohmann::json j{
      {"nodes", r.nodes},
      {"arcs", r.arcs},
      {"graph_acc", r.graph_acc},
      {"main_component_acc", r.main_component_acc},
      {"main_component_aspl", detail::optional_number(r.main_component_aspl.aspl)},
      {"clustering", to_string(r.clustering)},
      {"component_sizes",
       {{"weak_main", cs.weak_main},
        {"weak_main_fraction", cs.weak_main_fraction},
        {"strong_main", cs.strong_main},
        {"strong_main_fraction", cs.strong_main_fraction},
        {"weak_components", cs.weak_components},
        {"strong_components", cs.strong_components}}},
      {"hub_load", std::move(hubs)},
      {"edge_reuse_ratio", r.edge_reuse_ratio},
      {"sample",
       {{"fraction", r.sample_plan.fraction},
        {"seed", r.sample_plan.seed},
        {"component", to_string(r.sample_plan.component)},
        {"undirected", r.sample_plan.treat_as_undirected},
        {"sample_size", r.main_component_aspl.sample_size},
        {"component_size", r.main_component_aspl.component_size},
        {"pairs_used", r.main_component_aspl.pairs_used}}},
  };
  if (include_timings) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [phase, seconds] : r.phase_seconds) t[phase] = seconds;
    j["timings_seconds"] = std::move(t);
  }
  return j;
}

}  // namespace ledgergraph
