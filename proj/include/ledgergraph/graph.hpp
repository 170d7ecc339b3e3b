#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ledgergraph/error.hpp"

namespace ledgergraph {

/// Dense node index in [0, node_count).
using NodeId = std::uint32_t;
using Arc = std::pair<NodeId, NodeId>;

enum class ArcInsert { inserted, duplicated, self_loop_discarded };

namespace detail {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

inline std::uint64_t arc_key(NodeId src, NodeId dst) noexcept {
  return (static_cast<std::uint64_t>(src) << 32) | dst;
}

}  // namespace detail

// Simple directed graph built incrementally from address pairs.
//
// Arcs form a set: resubmitting an existing arc bumps its multiplicity,
// and (x, x) submissions are dropped but counted. Nodes created through
// intern_address() carry their address as label; nodes created through
// add_node() may be unlabeled.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  std::size_t node_count() const noexcept { return out_.size(); }
  std::size_t arc_count() const noexcept { return multiplicity_.size(); }
  std::uint64_t self_loop_count() const noexcept { return self_loops_; }
  // Sum of multiplicities over all stored arcs.
  std::uint64_t total_multiplicity() const noexcept { return submissions_; }

  NodeId intern_address(std::string_view address) {
    if (address.empty()) throw ContractError("intern_address: empty address");
    if (auto it = ids_.find(address); it != ids_.end()) return it->second;
    const NodeId id = push_node();
    labels_.back() = std::string(address);
    ids_.emplace(labels_.back(), id);
    return id;
  }

  // Appends a node; an empty label leaves it unlabeled.
  NodeId add_node(std::string label = {}) {
    if (!label.empty() && ids_.contains(label)) throw ContractError("add_node: duplicate label '" + label + "'");
    const NodeId id = push_node();
    if (!label.empty()) {
      labels_.back() = std::move(label);
      ids_.emplace(labels_.back(), id);
    }
    return id;
  }

  void add_nodes(std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) push_node();
  }

  ArcInsert add_arc(NodeId src, NodeId dst) {
    if (src >= node_count() || dst >= node_count()) {
      throw ContractError("add_arc: node id out of range (" + std::to_string(src) + ", " + std::to_string(dst) +
                          ") with " + std::to_string(node_count()) + " nodes");
    }
    if (src == dst) {
      ++self_loops_;
      return ArcInsert::self_loop_discarded;
    }
    ++submissions_;
    auto [it, fresh] = multiplicity_.try_emplace(detail::arc_key(src, dst), 1U);
    if (!fresh) {
      ++it->second;
      return ArcInsert::duplicated;
    }
    out_[src].push_back(dst);
    return ArcInsert::inserted;
  }

  bool has_arc(NodeId src, NodeId dst) const { return multiplicity_.contains(detail::arc_key(src, dst)); }

  std::uint32_t multiplicity(NodeId src, NodeId dst) const {
    auto it = multiplicity_.find(detail::arc_key(src, dst));
    return it == multiplicity_.end() ? 0U : it->second;
  }

  // Successors in arc insertion order.
  std::span<const NodeId> successors(NodeId v) const { return out_.at(v); }

  std::optional<NodeId> find(std::string_view address) const {
    if (auto it = ids_.find(address); it != ids_.end()) return it->second;
    return std::nullopt;
  }

  const std::string& label(NodeId v) const { return labels_.at(v); }

  bool fully_labeled() const noexcept { return ids_.size() == node_count(); }

  // (Σ multiplicity − |arcs|) / Σ multiplicity; 0 for an arc-free graph.
  double edge_reuse_ratio() const noexcept {
    if (submissions_ == 0) return 0.0;
    return static_cast<double>(submissions_ - arc_count()) / static_cast<double>(submissions_);
  }

  // All arcs in lexicographic (src, dst) order.
  std::vector<Arc> sorted_arcs() const {
    std::vector<Arc> arcs;
    arcs.reserve(arc_count());
    for (NodeId v = 0; v < node_count(); ++v) {
      const std::size_t first = arcs.size();
      for (NodeId w : out_[v]) arcs.emplace_back(v, w);
      std::sort(arcs.begin() + static_cast<std::ptrdiff_t>(first), arcs.end());
    }
    return arcs;
  }

 private:
  NodeId push_node() {
    if (out_.size() >= std::numeric_limits<NodeId>::max()) throw ContractError("graph: node id space exhausted");
    out_.emplace_back();
    labels_.emplace_back();
    return static_cast<NodeId>(out_.size() - 1);
  }

  std::vector<std::vector<NodeId>> out_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId, detail::StringHash, std::equal_to<>> ids_;
  std::unordered_map<std::uint64_t, std::uint32_t> multiplicity_;
  std::uint64_t submissions_ = 0;
  std::uint64_t self_loops_ = 0;
};

/// Symmetric copy of `graph`: every arc (a, b) also appears as (b, a).
/// Labels and node ids are preserved; multiplicities are not.
inline DirectedGraph undirected_projection(const DirectedGraph& graph) {
  DirectedGraph result;
  for (NodeId v = 0; v < graph.node_count(); ++v) result.add_node(graph.label(v));
  for (auto [a, b] : graph.sorted_arcs()) {
    result.add_arc(a, b);
    if (!result.has_arc(b, a)) result.add_arc(b, a);
  }
  return result;
}

// Compressed sparse rows with sorted neighbor lists.
struct Csr {
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> targets;

  std::span<const NodeId> operator[](NodeId v) const {
    return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }
  std::size_t degree(NodeId v) const { return offsets[v + 1] - offsets[v]; }
};

namespace detail {

// Builds a CSR from an arc list that is already sorted lexicographically and unique.
inline Csr csr_from_sorted(std::size_t node_count, std::span<const Arc> arcs) {
  Csr csr;
  csr.offsets.assign(node_count + 1, 0);
  csr.targets.reserve(arcs.size());
  for (auto [a, b] : arcs) {
    ++csr.offsets[a + 1];
    csr.targets.push_back(b);
  }
  std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());
  return csr;
}

inline std::vector<Arc> reversed_sorted(std::span<const Arc> arcs) {
  std::vector<Arc> rev;
  rev.reserve(arcs.size());
  for (auto [a, b] : arcs) rev.emplace_back(b, a);
  std::sort(rev.begin(), rev.end());
  return rev;
}

}  // namespace detail

/// Immutable read-only adjacency used by the analysis code.
class CompactGraph {
 public:
  CompactGraph() = default;

  explicit CompactGraph(const DirectedGraph& graph) : CompactGraph(graph.node_count(), graph.sorted_arcs()) {}

  // `arcs` must be sorted and free of duplicates and self-loops.
  CompactGraph(std::size_t node_count, std::vector<Arc> arcs)
      : node_count_(node_count), out_(detail::csr_from_sorted(node_count, arcs)) {
    const auto rev = detail::reversed_sorted(arcs);
    in_ = detail::csr_from_sorted(node_count, rev);
  }

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t arc_count() const noexcept { return out_.targets.size(); }
  std::span<const NodeId> successors(NodeId v) const { return out_[v]; }
  std::span<const NodeId> predecessors(NodeId v) const { return in_[v]; }
  std::size_t out_degree(NodeId v) const { return out_.degree(v); }
  std::size_t in_degree(NodeId v) const { return in_.degree(v); }

  bool has_arc(NodeId a, NodeId b) const {
    auto s = successors(a);
    return std::binary_search(s.begin(), s.end(), b);
  }

  std::vector<Arc> arcs() const {
    std::vector<Arc> result;
    result.reserve(arc_count());
    for (NodeId v = 0; v < node_count_; ++v)
      for (NodeId w : successors(v)) result.emplace_back(v, w);
    return result;
  }

  // Same nodes; arc set closed under reversal.
  CompactGraph symmetrized() const {
    std::vector<Arc> all = arcs();
    for (NodeId v = 0; v < node_count_; ++v)
      for (NodeId u : predecessors(v)) all.emplace_back(v, u);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return CompactGraph(node_count_, std::move(all));
  }

  // Subgraph induced by `members` (sorted ascending); node i of the result is members[i].
  CompactGraph induced(std::span<const NodeId> members) const {
    constexpr NodeId absent = std::numeric_limits<NodeId>::max();
    std::vector<NodeId> local(node_count_, absent);
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<NodeId>(i);
    std::vector<Arc> sub;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (NodeId w : successors(members[i]))
        if (local[w] != absent) sub.emplace_back(static_cast<NodeId>(i), local[w]);
    return CompactGraph(members.size(), std::move(sub));
  }

 private:
  std::size_t node_count_ = 0;
  Csr out_;
  Csr in_;
};

enum class ComponentKind { weak, strong };

struct Component {
  std::vector<NodeId> members;  // ascending
  ComponentKind kind = ComponentKind::weak;
  bool is_main = false;
};

// Component id per node plus the components themselves, ordered by lowest member.
struct ComponentPartition {
  std::vector<std::uint32_t> of_node;
  std::vector<Component> components;

  const Component& main() const {
    for (const auto& c : components)
      if (c.is_main) return c;
    throw ContractError("component partition of an empty graph has no main component");
  }
};

namespace detail {

inline ComponentPartition partition_from_roots(std::span<const NodeId> root, ComponentKind kind) {
  constexpr std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();
  ComponentPartition part;
  part.of_node.assign(root.size(), unset);
  std::vector<std::uint32_t> root_comp(root.size(), unset);
  for (NodeId v = 0; v < root.size(); ++v) {
    auto& slot = root_comp[root[v]];
    if (slot == unset) {
      slot = static_cast<std::uint32_t>(part.components.size());
      part.components.push_back(Component{{}, kind, false});
    }
    part.of_node[v] = slot;
    part.components[slot].members.push_back(v);
  }
  // Nodes are visited in ascending order, so components are already ordered by lowest
  // member; the first of maximal size wins ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < part.components.size(); ++i)
    if (part.components[i].members.size() > part.components[best].members.size()) best = i;
  if (!part.components.empty()) part.components[best].is_main = true;
  return part;
}

}  // namespace detail

inline ComponentPartition weak_partition(const CompactGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId w : graph.successors(v)) {
      NodeId a = find(v), b = find(w);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      parent[b] = a;  // root is always the lowest id in the set
    }
  }
  std::vector<NodeId> root(n);
  for (NodeId v = 0; v < n; ++v) root[v] = find(v);
  return detail::partition_from_roots(root, ComponentKind::weak);
}

// Iterative Tarjan.
inline ComponentPartition strong_partition(const CompactGraph& graph) {
  const std::size_t n = graph.node_count();
  constexpr std::uint32_t unvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  std::vector<NodeId> root(n);
  std::vector<std::pair<NodeId, std::size_t>> frames;  // node, next successor position
  std::uint32_t counter = 0;

  for (NodeId start = 0; start < n; ++start) {
    if (index[start] != unvisited) continue;
    frames.emplace_back(start, 0);
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      auto succ = graph.successors(v);
      if (pos < succ.size()) {
        const NodeId w = succ[pos++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const NodeId done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<NodeId> scc;
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          scc.push_back(w);
        } while (w != done);
        const NodeId lowest = *std::min_element(scc.begin(), scc.end());
        for (NodeId m : scc) root[m] = lowest;
      }
    }
  }
  return detail::partition_from_roots(root, ComponentKind::strong);
}

inline std::vector<Component> weakly_connected_components(const DirectedGraph& graph) {
  return weak_partition(CompactGraph(graph)).components;
}

inline std::vector<Component> strongly_connected_components(const DirectedGraph& graph) {
  return strong_partition(CompactGraph(graph)).components;
}

}  // namespace ledgergraph
