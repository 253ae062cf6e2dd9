#include <doctest.h>

#include <memory>

#include "oracles.hpp"
#include "slicewalk/error.hpp"
#include "slicewalk/graph_gen.hpp"
#include "slicewalk/slices.hpp"
#include "slicewalk/verify.hpp"

using namespace slicewalk;

namespace {

std::shared_ptr<const BipartiteGraph> shared(const BipartiteGraph& g) { return std::make_shared<const BipartiteGraph>(g); }

double max_entry_gap(const LinkOperator& a, const LinkOperator& b) {
  REQUIRE(a.ground == b.ground);
  return std::max((a.P - b.P).cwiseAbs().maxCoeff(), (a.pi - b.pi).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("two-sided facet counts match brute force") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto g = gen_bipartite_regular(6, 3, seed);
    const auto prof = oracle::profile(g);
    for (int kx = 0; kx <= 3; ++kx)
      for (int ky = 0; ky <= 3; ++ky) {
        if (kx + ky == 0) continue;
        TwoSidedSlice s(shared(g), kx, ky);
        CHECK(enumerate_facets(s).size() == static_cast<std::size_t>(prof[kx][ky]));
      }
  }
  TwoSidedSlice c6(shared(oracle::bip_c6()), 1, 1);
  const auto f = enumerate_facets(c6);
  REQUIRE(f.size() == 3);
  CHECK(c6.format_facet(f.front()) == "x0 | y2");
}

TEST_CASE("one-sided distribution matches the weight formula") {
  const auto g = gen_bipartite_regular(6, 3, 8);
  const double lambda = 0.7;
  OneSidedSlice s(shared(g), 3, lambda);
  const auto d = exact_distribution(s);
  CHECK(d.facets.size() == 20);
  double z = oracle::one_sided(g, 3, lambda);
  for (std::size_t i = 0; i < d.facets.size(); ++i) {
    const double w = std::exp(one_sided_log_weight(g, d.facets[i], lambda));
    CHECK(d.prob[i] == doctest::Approx(w / z).epsilon(1e-12));
  }
  CHECK(s.free_count({}) == 6);
}

TEST_CASE("one-sided lambda = 0 is uniform") {
  OneSidedSlice s(shared(oracle::bip_c6()), 2, 0.0);
  const auto d = exact_distribution(s);
  for (double p : d.prob) CHECK(p == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("regular slice counts independent k-sets") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto g = std::make_shared<const Graph>(gen_regular(12, 3, seed));
    for (int k = 1; k <= 4; ++k) {
      RegularSlice s(g, k);
      CHECK(enumerate_facets(s).size() == static_cast<std::size_t>(oracle::regular_count(*g, k)));
    }
  }
}

TEST_CASE("link pins faces and rejects dead ones") {
  const auto g = shared(oracle::bip_c6());
  TwoSidedSlice s(g, 1, 1);
  const auto l = link(s, {0});
  CHECK(l->free_size() == 1);
  CHECK(enumerate_facets(*l).size() == 1);
  CHECK_THROWS_AS(link(s, {0, 3}), EmptyLink);  // x0 ~ y0
}

TEST_CASE("closed-form link walks equal the enumerated ones") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto g = shared(gen_bipartite_regular(6, 3, seed));
    TwoSidedSlice top(g, 2, 2);
    int compared = 0;
    const auto faces = codim2_faces_exhaustive(top, 100000);
    REQUIRE(faces.has_value());
    for (const Facet& tau : *faces) {
      TwoSidedSlice s(g, 2, 2, tau);
      try {
        const auto closed = two_sided_link_walk_closed_form(s);
        CHECK(max_entry_gap(local_walk_exact(s), closed) <= 1e-12);
        ++compared;
      } catch (const EmptyLink&) {
      }
    }
    CHECK(compared > 0);
    OneSidedSlice os(g, 3, 0.4, {2});
    CHECK(max_entry_gap(local_walk_exact(os), one_sided_link_walk_closed_form(os)) <= 1e-12);
  }
  const auto rg = std::make_shared<const Graph>(oracle::cycle(8));
  RegularSlice rs(rg, 3, {0});
  CHECK(max_entry_gap(local_walk_exact(rs), regular_link_walk_closed_form(rs)) <= 1e-12);
}

TEST_CASE("link operators are reversible distributions") {
  OneSidedSlice s(shared(oracle::bip_c6()), 2, 0.3);
  const auto op = one_sided_link_walk_closed_form(s);
  CHECK(check_link_operator(op).ok(1e-12));
  CHECK(op.pi.sum() == doctest::Approx(1.0));
}
