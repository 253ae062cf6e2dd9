#include "slicewalk/graph.hpp"

#include <algorithm>
#include <string>

#include "slicewalk/error.hpp"

namespace slicewalk {

VertexSet make_vertex_set(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains(const VertexSet& s, int v) { return std::binary_search(s.begin(), s.end(), v); }

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

int intersection_size(std::span<const int> a, std::span<const int> b) {
  int n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

namespace {

void check_range(int v, int n, const char* what) {
  if (v < 0 || v >= n) {
    throw InvalidArgument(std::string(what) + " index " + std::to_string(v) + " out of range [0, " +
                          std::to_string(n) + ")");
  }
}

void check_set(const VertexSet& s, int n, const char* what) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    check_range(s[i], n, what);
    if (i > 0 && s[i - 1] >= s[i]) throw InvalidArgument(std::string(what) + " set is not sorted and unique");
  }
}

void sort_lists(std::vector<std::vector<int>>& adj) {
  for (auto& l : adj) std::sort(l.begin(), l.end());
}

bool has_repeats(const std::vector<std::vector<int>>& adj) {
  for (const auto& l : adj) {
    if (std::adjacent_find(l.begin(), l.end()) != l.end()) return true;
  }
  return false;
}

}  // namespace

// ---- Graph ---------------------------------------------------------------

Graph::Graph(int n) : adj_(static_cast<std::size_t>(std::max(n, 0))) {
  if (n < 0) throw InvalidArgument("negative vertex count");
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g(n);
  for (const auto& [u, v] : edges) {
    check_range(u, n, "vertex");
    check_range(v, n, "vertex");
    if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
    g.adj_[static_cast<std::size_t>(u)].push_back(v);
    g.adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  sort_lists(g.adj_);
  if (has_repeats(g.adj_)) throw InvalidArgument("repeated edge");
  return g;
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (const auto& l : adj_) total += l.size();
  return total / 2;
}

bool Graph::has_edge(int u, int v) const {
  const auto& l = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(l.begin(), l.end(), v);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < vertex_count(); ++u) {
    for (int v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::optional<int> Graph::regular_degree() const {
  if (adj_.empty()) return 0;
  const int d = degree(0);
  for (int v = 1; v < vertex_count(); ++v) {
    if (degree(v) != d) return std::nullopt;
  }
  return d;
}

RegularGraph::RegularGraph(Graph g) : Graph(std::move(g)) {
  auto d = regular_degree();
  if (!d) throw InvalidArgument("graph is not regular");
  degree_ = *d;
}

RegularGraph RegularGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  return RegularGraph(Graph::from_edges(n, edges));
}

// ---- BipartiteGraph ------------------------------------------------------

BipartiteGraph::BipartiteGraph(int nx, int ny)
    : adj_x_(static_cast<std::size_t>(std::max(nx, 0))), adj_y_(static_cast<std::size_t>(std::max(ny, 0))) {
  if (nx < 0 || ny < 0) throw InvalidArgument("negative side size");
}

BipartiteGraph BipartiteGraph::from_edges(int nx, int ny, const std::vector<std::pair<int, int>>& edges) {
  BipartiteGraph g(nx, ny);
  for (const auto& [x, y] : edges) {
    check_range(x, nx, "X");
    check_range(y, ny, "Y");
    g.adj_x_[static_cast<std::size_t>(x)].push_back(y);
    g.adj_y_[static_cast<std::size_t>(y)].push_back(x);
  }
  sort_lists(g.adj_x_);
  sort_lists(g.adj_y_);
  if (has_repeats(g.adj_x_)) throw InvalidArgument("repeated edge");
  return g;
}

std::size_t BipartiteGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& l : adj_x_) total += l.size();
  return total;
}

bool BipartiteGraph::has_edge(int x, int y) const {
  const auto& l = adj_x_[static_cast<std::size_t>(x)];
  return std::binary_search(l.begin(), l.end(), y);
}

std::vector<std::pair<int, int>> BipartiteGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count());
  for (int x = 0; x < x_count(); ++x) {
    for (int y : neighbors(Side::X, x)) out.emplace_back(x, y);
  }
  return out;
}

std::optional<int> BipartiteGraph::regular_degree() const {
  if (x_count() == 0 && y_count() == 0) return 0;
  const int d = x_count() > 0 ? degree(Side::X, 0) : degree(Side::Y, 0);
  for (int x = 0; x < x_count(); ++x) {
    if (degree(Side::X, x) != d) return std::nullopt;
  }
  for (int y = 0; y < y_count(); ++y) {
    if (degree(Side::Y, y) != d) return std::nullopt;
  }
  return d;
}

Graph BipartiteGraph::as_graph() const {
  std::vector<std::pair<int, int>> e;
  e.reserve(edge_count());
  for (const auto& [x, y] : edges()) e.emplace_back(x, x_count() + y);
  return Graph::from_edges(x_count() + y_count(), e);
}

BipartiteGraph BipartiteGraph::mirrored() const {
  BipartiteGraph g;
  g.adj_x_ = adj_y_;
  g.adj_y_ = adj_x_;
  return g;
}

BipartiteRegularGraph::BipartiteRegularGraph(BipartiteGraph g) : BipartiteGraph(std::move(g)) {
  if (x_count() != y_count()) throw InvalidArgument("regular bipartite graph needs |X| = |Y|");
  auto d = regular_degree();
  if (!d) throw InvalidArgument("bipartite graph is not regular");
  degree_ = *d;
}

BipartiteRegularGraph BipartiteRegularGraph::from_edges(int n_side, const std::vector<std::pair<int, int>>& edges) {
  return BipartiteRegularGraph(BipartiteGraph::from_edges(n_side, n_side, edges));
}

// ---- neighborhoods -------------------------------------------------------

VertexSet open_neighborhood(const Graph& g, const VertexSet& s) {
  check_set(s, g.vertex_count(), "vertex");
  std::vector<int> out;
  for (int v : s) {
    for (int u : g.neighbors(v)) out.push_back(u);
  }
  return set_difference(make_vertex_set(std::move(out)), s);
}

VertexSet closed_neighborhood(const Graph& g, const VertexSet& s) {
  return set_union(open_neighborhood(g, s), s);
}

VertexSet open_neighborhood(const BipartiteGraph& g, Side side, const VertexSet& s) {
  check_set(s, g.side_count(side), side == Side::X ? "X" : "Y");
  std::vector<int> out;
  for (int v : s) {
    for (int u : g.neighbors(side, v)) out.push_back(u);
  }
  return make_vertex_set(std::move(out));
}

BiVertexSet open_neighborhood(const BipartiteGraph& g, const BiVertexSet& s) {
  BiVertexSet n;
  n.y = set_difference(open_neighborhood(g, Side::X, s.x), s.y);
  n.x = set_difference(open_neighborhood(g, Side::Y, s.y), s.x);
  return n;
}

BiVertexSet closed_neighborhood(const BipartiteGraph& g, const BiVertexSet& s) {
  BiVertexSet n = open_neighborhood(g, s);
  return {set_union(n.x, s.x), set_union(n.y, s.y)};
}

VertexSet common_neighbors(const BipartiteGraph& g, VertexRef u, VertexRef v) {
  if (u == v) throw InvalidArgument("common_neighbors needs two distinct vertices");
  check_range(u.index, g.side_count(u.side), "vertex");
  check_range(v.index, g.side_count(v.side), "vertex");
  if (u.side != v.side) return {};
  auto a = g.neighbors(u.side, u.index);
  auto b = g.neighbors(v.side, v.index);
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// ---- derived graphs ------------------------------------------------------

BipartiteGraph bipartite_complement(const BipartiteGraph& g) {
  std::vector<std::pair<int, int>> e;
  for (int x = 0; x < g.x_count(); ++x) {
    auto nb = g.neighbors(Side::X, x);
    std::size_t j = 0;
    for (int y = 0; y < g.y_count(); ++y) {
      if (j < nb.size() && nb[j] == y) {
        ++j;
        continue;
      }
      e.emplace_back(x, y);
    }
  }
  return BipartiteGraph::from_edges(g.x_count(), g.y_count(), e);
}

Graph complement(const Graph& g) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < g.vertex_count(); ++u) {
    for (int v = u + 1; v < g.vertex_count(); ++v) {
      if (!g.has_edge(u, v)) e.emplace_back(u, v);
    }
  }
  return Graph::from_edges(g.vertex_count(), e);
}

Induced<Graph, VertexSet> induced_subgraph(const Graph& g, const VertexSet& keep) {
  check_set(keep, g.vertex_count(), "vertex");
  std::vector<int> index(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
  std::vector<std::pair<int, int>> e;
  for (int u : keep) {
    for (int v : g.neighbors(u)) {
      if (u < v && index[static_cast<std::size_t>(v)] >= 0) {
        e.emplace_back(index[static_cast<std::size_t>(u)], index[static_cast<std::size_t>(v)]);
      }
    }
  }
  return {Graph::from_edges(static_cast<int>(keep.size()), e), keep};
}

Induced<BipartiteGraph, BiVertexSet> induced_subgraph(const BipartiteGraph& g, const BiVertexSet& keep) {
  check_set(keep.x, g.x_count(), "X");
  check_set(keep.y, g.y_count(), "Y");
  std::vector<int> yi(static_cast<std::size_t>(g.y_count()), -1);
  for (std::size_t i = 0; i < keep.y.size(); ++i) yi[static_cast<std::size_t>(keep.y[i])] = static_cast<int>(i);
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i < keep.x.size(); ++i) {
    for (int y : g.neighbors(Side::X, keep.x[i])) {
      if (yi[static_cast<std::size_t>(y)] >= 0) e.emplace_back(static_cast<int>(i), yi[static_cast<std::size_t>(y)]);
    }
  }
  return {BipartiteGraph::from_edges(static_cast<int>(keep.x.size()), static_cast<int>(keep.y.size()), e), keep};
}

BipartiteGraph pruned_graph(const BipartiteGraph& g, const VertexSet& tau_x) {
  check_set(tau_x, g.x_count(), "X");
  const VertexSet ny = open_neighborhood(g, Side::X, tau_x);
  std::vector<std::pair<int, int>> e;
  for (const auto& [x, y] : g.edges()) {
    if (contains(tau_x, x) || contains(ny, y)) continue;
    e.emplace_back(x, y);
  }
  return BipartiteGraph::from_edges(g.x_count(), g.y_count(), e);
}

BipartiteGraph disjoint_union(const BipartiteGraph& a, const BipartiteGraph& b) {
  std::vector<std::pair<int, int>> e = a.edges();
  for (const auto& [x, y] : b.edges()) e.emplace_back(x + a.x_count(), y + a.y_count());
  return BipartiteGraph::from_edges(a.x_count() + b.x_count(), a.y_count() + b.y_count(), e);
}

bool is_independent(const Graph& g, const VertexSet& s) {
  for (int v : s) {
    for (int u : g.neighbors(v)) {
      if (contains(s, u)) return false;
    }
  }
  return true;
}

bool is_independent(const BipartiteGraph& g, const BiVertexSet& s) {
  for (int x : s.x) {
    for (int y : g.neighbors(Side::X, x)) {
      if (contains(s.y, y)) return false;
    }
  }
  return true;
}

}  // namespace slicewalk
