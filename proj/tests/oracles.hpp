#pragma once

// Brute-force reference computations over dense adjacency matrices. They share
// nothing with the library's CSR/BFS code paths and are only meant for small
// graphs (a few hundred nodes).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using Arcs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
using Matrix = std::vector<std::vector<bool>>;
constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline Matrix adjacency(std::size_t n, const Arcs& arcs) {
  Matrix a(n, std::vector<bool>(n, false));
  for (auto [s, d] : arcs)
    if (s != d) a[s][d] = true;
  return a;
}

inline std::vector<std::vector<int>> floyd_warshall(const Matrix& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j]) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

// Weak components by repeated flood fill on the symmetric closure; returns the
// members of the largest (lowest member wins ties).
inline std::vector<std::uint32_t> weak_main(const Matrix& a) {
  const std::size_t n = a.size();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::uint32_t>> comps;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comps.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = static_cast<int>(comps.size() - 1);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      comps.back().push_back(static_cast<std::uint32_t>(v));
      for (std::size_t u = 0; u < n; ++u)
        if ((a[v][u] || a[u][v]) && comp[u] < 0) {
          comp[u] = comp[s];
          stack.push_back(u);
        }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < comps.size(); ++i)
    if (comps[i].size() > comps[best].size()) best = i;
  auto m = comps.empty() ? std::vector<std::uint32_t>{} : comps[best];
  std::sort(m.begin(), m.end());
  return m;
}

// Strong components from the reachability relation: u ~ v iff d(u,v) and d(v,u) are finite.
inline std::vector<std::vector<std::uint32_t>> strong_components(const Matrix& a) {
  const auto d = floyd_warshall(a);
  const std::size_t n = a.size();
  std::vector<bool> done(n, false);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (done[v]) continue;
    out.emplace_back();
    for (std::size_t u = v; u < n; ++u)
      if (d[v][u] < kInf && d[u][v] < kInf) {
        done[u] = true;
        out.back().push_back(static_cast<std::uint32_t>(u));
      }
  }
  return out;
}

struct AsplTotals {
  std::uint64_t sum = 0;
  std::uint64_t pairs = 0;
  double value() const { return static_cast<double>(sum) / static_cast<double>(pairs); }
};

// Exact ASPL over ordered connected pairs of the weak main component.
inline AsplTotals all_pairs_aspl(std::size_t n, const Arcs& arcs) {
  const auto a = adjacency(n, arcs);
  const auto d = floyd_warshall(a);
  const auto main = weak_main(a);
  AsplTotals t;
  for (auto s : main)
    for (auto u : main)
      if (s != u && d[s][u] < kInf) {
        t.sum += static_cast<std::uint64_t>(d[s][u]);
        ++t.pairs;
      }
  return t;
}

// Mean undirected local clustering: for each node, the fraction of its
// neighbor pairs that are adjacent (0 when fewer than two neighbors).
inline double average_clustering(std::size_t n, const Arcs& arcs) {
  if (n == 0) return 0.0;
  const auto a = adjacency(n, arcs);
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> nb;
    for (std::size_t u = 0; u < n; ++u)
      if (a[v][u] || a[u][v]) nb.push_back(u);
    const std::size_t k = nb.size();
    if (k < 2) continue;
    std::uint64_t links = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (a[nb[i]][nb[j]] || a[nb[j]][nb[i]]) ++links;
    total += static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
  }
  return total / static_cast<double>(n);
}

// Explicitly enumerates every shortest path of every ordered pair inside the
// weak component of `v`, crediting v with (paths through v)/(all paths) per pair.
// Returns the unnormalized mass and the component size.
inline std::pair<double, std::size_t> enumerated_path_load(std::size_t n, const Arcs& arcs, std::uint32_t v) {
  const auto a = adjacency(n, arcs);
  const auto d = floyd_warshall(a);
  std::vector<std::uint32_t> comp;
  for (std::uint32_t u = 0; u < n; ++u) {
    // same weak component iff connected in the symmetric closure
    bool linked = u == v;
    if (!linked) {
      std::vector<bool> seen(n, false);
      std::vector<std::uint32_t> stack{v};
      seen[v] = true;
      while (!stack.empty() && !linked) {
        auto x = stack.back();
        stack.pop_back();
        for (std::uint32_t y = 0; y < n; ++y)
          if ((a[x][y] || a[y][x]) && !seen[y]) {
            if (y == u) linked = true;
            seen[y] = true;
            stack.push_back(y);
          }
      }
    }
    if (linked) comp.push_back(u);
  }
  double mass = 0.0;
  for (auto s : comp) {
    for (auto t : comp) {
      if (s == t || s == v || t == v || d[s][t] >= kInf) continue;
      std::uint64_t all = 0, through = 0;
      std::vector<std::uint32_t> path{s};
      std::function<void(std::uint32_t)> walk = [&](std::uint32_t x) {
        if (x == t) {
          ++all;
          if (std::find(path.begin(), path.end(), v) != path.end()) ++through;
          return;
        }
        for (std::uint32_t y = 0; y < n; ++y)
          if (a[x][y] && d[s][y] == d[s][x] + 1 && d[y][t] == d[x][t] - 1) {
            path.push_back(y);
            walk(y);
            path.pop_back();
          }
      };
      walk(s);
      mass += static_cast<double>(through) / static_cast<double>(all);
    }
  }
  return {mass, comp.size()};
}

inline double enumerated_load(std::size_t n, const Arcs& arcs, std::uint32_t v) {
  auto [mass, size] = enumerated_path_load(n, arcs, v);
  if (size < 3) return 0.0;
  return mass / (static_cast<double>(size - 1) * static_cast<double>(size - 2));
}

}  // namespace oracle
