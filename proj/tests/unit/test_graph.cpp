#include <doctest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "slicewalk/error.hpp"
#include "slicewalk/graph.hpp"
#include "slicewalk/graph_gen.hpp"

using namespace slicewalk;

TEST_CASE("from_edges rejects loops, repeats and bad indices") {
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), InvalidArgument);
  CHECK_THROWS_AS(BipartiteGraph::from_edges(2, 2, {{0, 1}, {0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(BipartiteGraph::from_edges(2, 2, {{2, 0}}), InvalidArgument);
}

TEST_CASE("bipartite C6 basics") {
  const auto g = oracle::bip_c6();
  CHECK(g.edge_count() == 6);
  CHECK(g.regular_degree() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(0, 2));
  const Graph p = g.as_graph();
  CHECK(p.vertex_count() == 6);
  CHECK(p.has_edge(0, 3 + 1));
  CHECK(g.mirrored().mirrored() == g);
  CHECK(open_neighborhood(g, Side::X, VertexSet{0}) == VertexSet{0, 1});
  CHECK(common_neighbors(g, {Side::X, 0}, {Side::X, 1}) == VertexSet{1});
  CHECK(common_neighbors(g, {Side::X, 0}, {Side::Y, 1}).empty());
}

TEST_CASE("bipartite complement of C6 is a perfect matching") {
  const auto c = bipartite_complement(oracle::bip_c6());
  CHECK(c.edge_count() == 3);
  CHECK(c.regular_degree() == 1);
  CHECK(c.has_edge(0, 2));
}

TEST_CASE("pruned graph drops edges at tau and its neighborhood") {
  const auto g = oracle::bip_c6();
  const auto p = pruned_graph(g, {0});
  // N(x0) = {y0, y1}; remaining edges avoid x0, y0, y1
  for (auto [x, y] : p.edges()) {
    CHECK(x != 0);
    CHECK(y != 0);
    CHECK(y != 1);
  }
  CHECK(p.edge_count() == 2);
}

TEST_CASE("disjoint union shifts the second graph") {
  const auto g = oracle::bip_c6();
  const auto u = disjoint_union(g, g);
  CHECK(u.x_count() == 6);
  CHECK(u.edge_count() == 12);
  CHECK(u.has_edge(3, 3));
  CHECK_FALSE(u.has_edge(0, 3));
}

TEST_CASE("independence checks") {
  const auto g = oracle::bip_c6();
  CHECK(is_independent(g, BiVertexSet{{0}, {2}}));
  CHECK_FALSE(is_independent(g, BiVertexSet{{0}, {0}}));
  CHECK(is_independent(oracle::cycle(6), VertexSet{0, 2, 4}));
  CHECK_FALSE(is_independent(oracle::cycle(6), VertexSet{0, 1}));
}

TEST_CASE("generators give simple regular graphs, deterministically") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto a = gen_bipartite_regular(50, 3, seed);
    CHECK(a.regular_degree() == 3);
    CHECK(a.x_count() == 50);
    CHECK(a == gen_bipartite_regular(50, 3, seed));
    const auto r = gen_regular(40, 3, seed);
    CHECK(r.regular_degree() == 3);
    CHECK(r == gen_regular(40, 3, seed));
  }
  CHECK_FALSE(gen_bipartite_regular(50, 3, 1) == gen_bipartite_regular(50, 3, 2));
  GenOptions rep;
  rep.method = GenMethod::repair;
  GenStats st;
  const auto g = gen_bipartite_regular(200, 8, 5, rep, &st);
  CHECK(st.used == GenMethod::repair);
  CHECK(g.regular_degree() == 8);
  CHECK_THROWS_AS(gen_regular(5, 3, 1), InvalidArgument);  // odd degree sum
}

TEST_CASE("graph text format round trip") {
  const auto g = gen_bipartite_regular(12, 3, 9);
  std::stringstream s;
  write_graph(s, g);
  const AnyGraph back = read_graph(s);
  REQUIRE(std::holds_alternative<BipartiteRegularGraph>(back));
  CHECK(std::get<BipartiteRegularGraph>(back) == g);

  std::stringstream bad("bipartite 2 1\n0 0\n0 1\n");
  CHECK_THROWS_AS(read_graph(bad), InvalidArgument);
  std::stringstream junk("cube 3 3\n");
  CHECK_THROWS_AS(read_graph(junk), InvalidArgument);
}

TEST_CASE("common neighbor stats against a direct pair count") {
  const auto g = gen_bipartite_regular(30, 6, 4);
  int max_common = 0;
  long long above = 0;
  for (Side s : {Side::X, Side::Y})
    for (int u = 0; u < 30; ++u)
      for (int v = u + 1; v < 30; ++v) {
        std::set<int> a(g.neighbors(s, u).begin(), g.neighbors(s, u).end());
        int c = 0;
        for (int w : g.neighbors(s, v)) c += a.count(w) ? 1 : 0;
        max_common = std::max(max_common, c);
        above += c > 2 ? 1 : 0;
      }
  const auto st = common_neighbor_stats(g);
  CHECK(st.max_common == max_common);
  CHECK(st.pairs_above_two == above);
}
