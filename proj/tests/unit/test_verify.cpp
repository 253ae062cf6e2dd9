#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "slicewalk/graph_gen.hpp"
#include "slicewalk/verify.hpp"

using namespace slicewalk;

TEST_CASE("two-sided C6 meets its bound with equality") {
  const auto r = verify_top_link_two_sided(oracle::bip_c6(), 1, 1);
  REQUIRE(r.links.size() == 1);
  const auto& l = r.links.front();
  CHECK(l.face_type == "cross");
  CHECK(l.lambda2 == doctest::Approx(1.0));
  REQUIRE(l.bound.has_value());
  CHECK(*l.bound == doctest::Approx(1.0));
  CHECK(l.pass);
  CHECK(r.all_pass());
}

TEST_CASE("edgeless graphs give complete-graph links") {
  const BipartiteGraph empty(5, 5);
  const auto r = verify_top_link_two_sided(empty, 2, 0);
  REQUIRE(r.links.size() == 1);
  CHECK(r.links[0].face_type == "same_x");
  CHECK(r.links[0].lambda2 == doctest::Approx(-1.0 / 4.0));
  CHECK(r.all_pass());

  const auto o = verify_top_link_one_sided(empty, 3, 0.4);
  CHECK(o.all_pass());
  for (const auto& l : o.links) {
    CHECK(*l.delta_tau == 0.0);
    CHECK(l.lambda2 == doctest::Approx(-1.0 / 3.0));  // 4 free vertices
    CHECK(*l.bound == doctest::Approx((0.16 - 1.0) / 3.0));
  }
}

TEST_CASE("regular-slice bound on the 6-cycle") {
  const auto r = verify_top_link_regular(oracle::cycle(6), 2);
  REQUIRE(r.links.size() == 1);
  const auto& l = r.links.front();
  // complement of C6 is the triangular prism: walk lambda_2 = 1/3
  CHECK(l.lambda2 == doctest::Approx(1.0 / 3.0));
  CHECK(*l.bound == doctest::Approx(0.25));
  CHECK_FALSE(l.pass);
  CHECK(*l.corrected_bound == doctest::Approx(1.0 / 3.0));
  CHECK(*l.corrected_pass);
  CHECK(*l.adjacency_pass);
}

TEST_CASE("one-sided bound with a negative numerator") {
  const auto r = verify_top_link_one_sided(oracle::bip_c6(), 2, 0.3);
  REQUIRE(r.links.size() == 1);
  const auto& l = r.links.front();
  CHECK(l.hypothesis_met);
  CHECK(l.lambda2 == doctest::Approx(-0.5));
  CHECK_FALSE(l.pass);
  CHECK(l.lambda2 <= *l.intermediate_bound + kBoundTol);
}

TEST_CASE("random sweeps pass") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto g = gen_bipartite_regular(10, 3, seed);
    const auto two = verify_top_link_two_sided(g, 2, 2);
    CHECK(two.coverage == "exhaustive");
    CHECK(two.all_pass());
    CHECK(two.adjacency_failed == 0);
    const auto one = verify_top_link_one_sided(gen_bipartite_regular(12, 3, seed), 3, 0.25);
    CHECK(one.all_pass());
    CHECK(one.identity_failed == 0);
    CHECK(one.identity_max_deviation <= 1e-10);
    CHECK(one.psd_failed == 0);
  }
}

TEST_CASE("identity and PSD chain on C6") {
  const auto g = oracle::bip_c6();
  const auto id = verify_matrix_exponent_identity(g, 2, 0.5, {});
  CHECK(id.holds);
  CHECK(id.max_deviation <= 1e-10);
  const auto psd = verify_psd_chain(g, 2, 0.5, {});
  CHECK(psd.hypothesis_met);
  CHECK(psd.all_hold());
  CHECK(psd.goal1.has_value());
  CHECK(psd.goal3.has_value());
}

TEST_CASE("PSD chain is gated on the common-neighbor hypothesis") {
  const auto g = BipartiteGraph::from_edges(4, 4, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}, {2, 3}, {3, 3}});
  const auto psd = verify_psd_chain(g, 2, 0.5, {});
  CHECK_FALSE(psd.hypothesis_met);
  CHECK(psd.max_common == 3);
  CHECK_FALSE(psd.goal3.has_value());
  CHECK_FALSE(psd.goal1.has_value());
  CHECK(psd.goal4.holds);
}

TEST_CASE("face samplers") {
  const auto g = std::make_shared<const BipartiteGraph>(gen_bipartite_regular(10, 3, 2));
  auto top = std::make_shared<const TwoSidedSlice>(g, 2, 2);
  CHECK_FALSE(codim2_faces_exhaustive(*top, 10).has_value());
  const auto all = *codim2_faces_exhaustive(*top, 100000);
  const auto some = codim2_faces_sampled(top, 50, 7);
  CHECK(some.size() == 50);
  std::set<Facet> uniq(some.begin(), some.end());
  CHECK(uniq.size() == some.size());
  for (const auto& f : some) {
    CHECK(f.size() == 2);
    CHECK(std::binary_search(all.begin(), all.end(), f));
  }
}
