#include <doctest.h>

#include "oracles.hpp"
#include "slicewalk/error.hpp"
#include "slicewalk/experiments.hpp"

using namespace slicewalk;

TEST_CASE("Wilson interval") {
  const auto f = make_frequency(50, 100);
  CHECK(f.rate == doctest::Approx(0.5));
  CHECK(f.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(f.hi == doctest::Approx(0.5962).epsilon(1e-3));
  const auto z = make_frequency(0, 100);
  CHECK(z.lo == 0.0);
  CHECK(z.hi == doctest::Approx(0.0370).epsilon(1e-2));
}

TEST_CASE("config validation names the key") {
  ExperimentConfig c;
  c.c = 0.4;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("c"), InvalidArgument);
  c = {};
  c.mode = "fast";
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("mode"), InvalidArgument);
  c = {};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("single-vertex marginal on K11") {
  const auto k11 = Graph::from_edges(2, {{0, 1}});
  CHECK(exact_vertex_marginal(k11, 0, 1.0) == doctest::Approx(1.0 / 3.0));
  const auto g = oracle::cycle(7);
  // Pr[v in I] = lambda Z(G - N[v]) / Z(G); G - N[0] is a path on 4 vertices
  const double z = oracle::partition(g, 0.5);
  const double zp = oracle::partition(Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}}), 0.5);
  CHECK(exact_vertex_marginal(g, 0, 0.5) == doctest::Approx(0.5 * zp / z));
}

TEST_CASE("set-size sampler") {
  ExperimentConfig c;
  c.lambda = 0.0;
  c.samples = 200;
  const auto zero = independent_set_size_on(oracle::bip_c6(), c);
  CHECK(zero.mean_size == 0.0);
  CHECK(zero.large_total.hits == 0);
  CHECK(zero.both_sides_large.hits == 0);

  // mean |I| on C6 at lambda = 1: Z = 18, sum |I| over independent sets = 6 + 2*9 + 3*2 = 30
  c.lambda = 1.0;
  c.samples = 40000;
  const auto one = independent_set_size_on(oracle::bip_c6(), c);
  CHECK(one.mean_size == doctest::Approx(30.0 / 18.0).epsilon(0.03));
  REQUIRE(one.max_exact_marginal.has_value());
  CHECK(*one.max_exact_marginal <= one.marginal_bound);
}

TEST_CASE("large-set guard and trivial sizes") {
  ExperimentConfig c;
  c.n_side = 32;
  c.delta = 8;
  c.samples = 20;
  CHECK(experiment_large_set_expansion(c).insufficient_scale);
  c.n_side = 200;
  c.delta = 4;
  c.a = 1e-9;  // tau = X covers Y
  const auto all = experiment_large_set_expansion(c);
  CHECK(all.tau_size == 200);
  CHECK(all.mean_uncovered == 0.0);
  CHECK(all.pass.rate == 1.0);
}

TEST_CASE("slow mixing at lambda = 0 matches the combinatorial ratio") {
  ExperimentConfig c;
  c.n_side = 4;
  c.delta = 2;
  c.k = 2;
  c.lambda = 0.0;
  c.mode = "exact";
  const auto r = experiment_slow_mixing(c);
  REQUIRE(r.phi_s.has_value());
  CHECK(*r.phi_s == doctest::Approx(*r.boundary_ratio).epsilon(1e-12));
  CHECK(*r.facets == 28);
  c.k = 3;
  CHECK_THROWS_AS(experiment_slow_mixing(c), InvalidArgument);
}

TEST_CASE("concentration report on a small instance") {
  ExperimentConfig c;
  c.n_side = 2000;
  c.delta = 16;
  c.samples = 30;
  const auto r = experiment_neighborhood_concentration(c);
  CHECK(r.at_alpha.tau_size == static_cast<int>(std::floor(r.alpha * 2000)));
  CHECK(r.at_alpha.mean == doctest::Approx(r.exact_mean).epsilon(0.05));
  CHECK(r.note.find("sampled") != std::string::npos);
}

TEST_CASE("experiments are seed-deterministic") {
  ExperimentConfig c;
  c.n_side = 300;
  c.delta = 3;
  c.samples = 4;
  c.seed = 5;
  const auto a = experiment_ramanujan(c);
  const auto b = experiment_ramanujan(c);
  CHECK(a.lambda2 == b.lambda2);
  const auto x = experiment_common_neighbors(c);
  CHECK(x.max_common == experiment_common_neighbors(c).max_common);
}
