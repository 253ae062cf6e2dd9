#pragma once

// Brute-force references used by the unit tests. Everything here works on
// bitmasks over all vertices and shares no code with the library.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "slicewalk/graph.hpp"

namespace oracle {

using slicewalk::BipartiteGraph;
using slicewalk::Graph;

inline BipartiteGraph bip_c6() {
  return BipartiteGraph::from_edges(3, 3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 0}});
}

inline Graph cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, e);
}

// adjacency bitmasks, X first then Y
inline std::vector<std::uint64_t> masks(const BipartiteGraph& g) {
  const int nx = g.x_count();
  std::vector<std::uint64_t> m(static_cast<std::size_t>(nx + g.y_count()), 0);
  for (auto [x, y] : g.edges()) {
    m[static_cast<std::size_t>(x)] |= 1ULL << (nx + y);
    m[static_cast<std::size_t>(nx + y)] |= 1ULL << x;
  }
  return m;
}

inline std::vector<std::uint64_t> masks(const Graph& g) {
  std::vector<std::uint64_t> m(static_cast<std::size_t>(g.vertex_count()), 0);
  for (auto [u, v] : g.edges()) {
    m[static_cast<std::size_t>(u)] |= 1ULL << v;
    m[static_cast<std::size_t>(v)] |= 1ULL << u;
  }
  return m;
}

inline bool independent(std::uint64_t s, const std::vector<std::uint64_t>& adj) {
  for (std::size_t v = 0; v < adj.size(); ++v)
    if ((s >> v & 1) && (adj[v] & s)) return false;
  return true;
}

// counts[a][b]: independent sets with a vertices in X and b in Y
inline std::vector<std::vector<double>> profile(const BipartiteGraph& g) {
  const int nx = g.x_count(), ny = g.y_count();
  const auto adj = masks(g);
  std::vector<std::vector<double>> c(static_cast<std::size_t>(nx + 1), std::vector<double>(static_cast<std::size_t>(ny + 1)));
  const std::uint64_t xmask = (1ULL << nx) - 1;
  for (std::uint64_t s = 0; s < (1ULL << (nx + ny)); ++s) {
    if (!independent(s, adj)) continue;
    c[static_cast<std::size_t>(__builtin_popcountll(s & xmask))][static_cast<std::size_t>(__builtin_popcountll(s >> nx))] += 1;
  }
  return c;
}

inline double partition(const Graph& g, double lambda) {
  const auto adj = masks(g);
  double z = 0.0;
  for (std::uint64_t s = 0; s < (1ULL << adj.size()); ++s)
    if (independent(s, adj)) z += std::pow(lambda, __builtin_popcountll(s));
  return z;
}

inline double partition(const BipartiteGraph& g, double lambda) {
  const auto c = profile(g);
  double z = 0.0;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = 0; b < c[a].size(); ++b) z += c[a][b] * std::pow(lambda, static_cast<double>(a + b));
  return z;
}

// sum over k-subsets S of X of lambda^k (1+lambda)^{|Y \ N(S)|}
inline double one_sided(const BipartiteGraph& g, int k, double lambda) {
  const int nx = g.x_count();
  double z = 0.0;
  for (std::uint64_t s = 0; s < (1ULL << nx); ++s) {
    if (__builtin_popcountll(s) != k) continue;
    int free = 0;
    for (int y = 0; y < g.y_count(); ++y) {
      bool hit = false;
      for (int x : g.neighbors(slicewalk::Side::Y, y)) hit = hit || (s >> x & 1);
      free += hit ? 0 : 1;
    }
    z += std::pow(lambda, k) * std::pow(1.0 + lambda, free);
  }
  return z;
}

// independent k-sets of a plain graph
inline double regular_count(const Graph& g, int k) {
  const auto adj = masks(g);
  double n = 0;
  for (std::uint64_t s = 0; s < (1ULL << adj.size()); ++s)
    if (__builtin_popcountll(s) == k && independent(s, adj)) n += 1;
  return n;
}

}  // namespace oracle
