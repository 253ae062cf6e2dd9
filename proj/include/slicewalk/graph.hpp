#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace slicewalk {

enum class Side : std::uint8_t { X = 0, Y = 1 };

constexpr Side opposite(Side s) { return s == Side::X ? Side::Y : Side::X; }

// Sorted, duplicate-free list of vertex indices on one side (or of a plain graph).
using VertexSet = std::vector<int>;

// A vertex of a bipartite graph: side plus 0-based index within that side.
struct VertexRef {
  Side side;
  int index;
  friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

// Vertex subset of a bipartite graph, kept per side.
struct BiVertexSet {
  VertexSet x;
  VertexSet y;
  const VertexSet& on(Side s) const { return s == Side::X ? x : y; }
  VertexSet& on(Side s) { return s == Side::X ? x : y; }
  bool empty() const { return x.empty() && y.empty(); }
  friend bool operator==(const BiVertexSet&, const BiVertexSet&) = default;
};

// Sorts and removes duplicates.
VertexSet make_vertex_set(std::vector<int> v);
bool contains(const VertexSet& s, int v);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
// Size of the intersection of two sorted ranges, by merge.
int intersection_size(std::span<const int> a, std::span<const int> b);

// Simple undirected graph with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  // Throws InvalidArgument on loops, repeated edges or out-of-range endpoints.
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const;
  std::span<const int> neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  bool has_edge(int u, int v) const;
  // Edges as (u, v) with u < v, lexicographically sorted.
  std::vector<std::pair<int, int>> edges() const;
  std::optional<int> regular_degree() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 protected:
  std::vector<std::vector<int>> adj_;
};

// Simple Delta-regular graph.
class RegularGraph : public Graph {
 public:
  // Throws InvalidArgument if `g` is not regular (the empty graph is 0-regular).
  explicit RegularGraph(Graph g);
  static RegularGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  using Graph::degree;
  int degree() const { return degree_; }

 private:
  int degree_ = 0;
};

// Bipartite graph with sides X = {0..nx-1}, Y = {0..ny-1}; every edge crosses.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(int nx, int ny);

  // Edges are (x, y) pairs. Throws InvalidArgument on repeats or bad indices.
  static BipartiteGraph from_edges(int nx, int ny, const std::vector<std::pair<int, int>>& edges);

  int x_count() const { return static_cast<int>(adj_x_.size()); }
  int y_count() const { return static_cast<int>(adj_y_.size()); }
  int side_count(Side s) const { return s == Side::X ? x_count() : y_count(); }
  std::size_t edge_count() const;

  std::span<const int> neighbors(Side s, int v) const {
    return s == Side::X ? std::span<const int>(adj_x_[static_cast<std::size_t>(v)])
                        : std::span<const int>(adj_y_[static_cast<std::size_t>(v)]);
  }
  int degree(Side s, int v) const { return static_cast<int>(neighbors(s, v).size()); }
  bool has_edge(int x, int y) const;
  std::vector<std::pair<int, int>> edges() const;
  std::optional<int> regular_degree() const;

  // Same graph on vertex ids 0..nx-1 (X) followed by nx..nx+ny-1 (Y).
  Graph as_graph() const;
  // Roles of X and Y swapped.
  BipartiteGraph mirrored() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 protected:
  std::vector<std::vector<int>> adj_x_;
  std::vector<std::vector<int>> adj_y_;
};

// Simple Delta-regular bipartite graph with |X| = |Y|.
class BipartiteRegularGraph : public BipartiteGraph {
 public:
  // Throws InvalidArgument if sides differ in size or degrees are not all equal.
  explicit BipartiteRegularGraph(BipartiteGraph g);
  static BipartiteRegularGraph from_edges(int n_side, const std::vector<std::pair<int, int>>& edges);

  using BipartiteGraph::degree;
  int degree() const { return degree_; }
  int n_side() const { return x_count(); }

 private:
  int degree_ = 0;
};

// ---- neighborhoods -------------------------------------------------------

// N(S) \ S for a plain graph.
VertexSet open_neighborhood(const Graph& g, const VertexSet& s);
// S u N(S).
VertexSet closed_neighborhood(const Graph& g, const VertexSet& s);
// Neighbors (on the opposite side) of a one-sided set.
VertexSet open_neighborhood(const BipartiteGraph& g, Side side, const VertexSet& s);
// N(S) for a two-sided set; disjoint from S only if S is independent.
BiVertexSet open_neighborhood(const BipartiteGraph& g, const BiVertexSet& s);
BiVertexSet closed_neighborhood(const BipartiteGraph& g, const BiVertexSet& s);

// N(u) n N(v). Empty if u and v lie on opposite sides. Throws if u == v.
VertexSet common_neighbors(const BipartiteGraph& g, VertexRef u, VertexRef v);

// ---- derived graphs ------------------------------------------------------

// Crossing edges are exactly the crossing non-edges of g.
BipartiteGraph bipartite_complement(const BipartiteGraph& g);
// Plain graph complement.
Graph complement(const Graph& g);

template <typename G, typename Keep>
struct Induced {
  G graph;
  Keep original;  // original[i] = index in the parent graph of new vertex i
};

Induced<Graph, VertexSet> induced_subgraph(const Graph& g, const VertexSet& keep);
Induced<BipartiteGraph, BiVertexSet> induced_subgraph(const BipartiteGraph& g, const BiVertexSet& keep);

// Same vertex set; every edge touching tau u N(tau) removed (tau a subset of X).
BipartiteGraph pruned_graph(const BipartiteGraph& g, const VertexSet& tau_x);

// Disjoint union; the second graph's vertices are shifted past the first's.
BipartiteGraph disjoint_union(const BipartiteGraph& a, const BipartiteGraph& b);

bool is_independent(const Graph& g, const VertexSet& s);
bool is_independent(const BipartiteGraph& g, const BiVertexSet& s);

}  // namespace slicewalk
