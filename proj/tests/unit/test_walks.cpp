#include <doctest.h>

#include <memory>

#include "oracles.hpp"
#include "slicewalk/error.hpp"
#include "slicewalk/graph_gen.hpp"
#include "slicewalk/walks.hpp"

using namespace slicewalk;

namespace {

std::shared_ptr<const BipartiteGraph> shared(const BipartiteGraph& g) { return std::make_shared<const BipartiteGraph>(g); }

void check_balance(const Slice& s) {
  const auto d = exact_distribution(s);
  const Eigen::MatrixXd p = exact_transition_matrix(s);
  Eigen::VectorXd pi = Eigen::Map<const Eigen::VectorXd>(d.prob.data(), static_cast<Eigen::Index>(d.prob.size()));
  CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK(detailed_balance_defect(p, pi) <= 1e-12);
  CHECK(((pi.transpose() * p).transpose() - pi).cwiseAbs().maxCoeff() <= 1e-12);
}

}  // namespace

TEST_CASE("down-up matrices are reversible for every family") {
  const auto g = shared(gen_bipartite_regular(6, 3, 21));
  check_balance(TwoSidedSlice(g, 2, 1));
  check_balance(OneSidedSlice(g, 3, 0.5));
  check_balance(RegularSlice(std::make_shared<const Graph>(g->as_graph()), 3));
}

TEST_CASE("two-state spectral gap") {
  Eigen::MatrixXd p(2, 2);
  p << 0.75, 0.25, 0.25, 0.75;
  Eigen::VectorXd pi(2);
  pi << 0.5, 0.5;
  const auto gap = spectral_gap(p, pi);
  CHECK(gap.lambda2 == doctest::Approx(0.5));
  CHECK(gap.gap == doctest::Approx(0.5));
  Eigen::VectorXd skew(2);
  skew << 0.9, 0.1;
  CHECK_THROWS_AS(spectral_gap(p, skew), InvalidArgument);
}

TEST_CASE("C6 two-sided (1,1) chain is frozen") {
  TwoSidedSlice s(shared(oracle::bip_c6()), 1, 1);
  CHECK(communicating_classes(exact_transition_matrix(s)) == 3);
}

TEST_CASE("chains reach the exact distribution") {
  const auto g = shared(gen_bipartite_regular(6, 3, 4));
  auto slice = std::make_shared<const OneSidedSlice>(g, 2, 1.0);
  ChainConfig cfg;
  cfg.steps = 300000;
  cfg.seed = 12;
  RunOptions ro;
  ro.keep_samples = false;
  const auto r = run_chain(slice, cfg, ro);
  REQUIRE(r.report.tv.has_value());
  CHECK(*r.report.tv < 0.03);
  // same seed, same run
  CHECK(run_chain(slice, cfg, ro).report.mean_observable == r.report.mean_observable);
}

TEST_CASE("incremental counters stay consistent") {
  const auto g = shared(gen_bipartite_regular(20, 3, 2));
  Rng rng(3);
  std::vector<SlicePtr> slices{std::make_shared<const TwoSidedSlice>(g, 3, 2),
                               std::make_shared<const OneSidedSlice>(g, 4, 0.3),
                               std::make_shared<const RegularSlice>(std::make_shared<const Graph>(g->as_graph()), 4)};
  for (const auto& s : slices) {
    auto c = make_chain(s, greedy_initial_state(*s, rng));
    for (int i = 0; i < 5000; ++i) c->lazy_step(rng);
    CHECK(c->counters_consistent());
    CHECK(s->is_facet(c->facet()));
  }
  CHECK_THROWS_AS(make_chain(slices[0], Facet{0}), InvalidArgument);
}

TEST_CASE("tv distance and autocorrelation time") {
  CHECK(tv_distance({2, 2}, {0.5, 0.5}) == doctest::Approx(0.0));
  CHECK(tv_distance({1, 0}, {0.5, 0.5}) == doctest::Approx(0.5));
  Rng rng(1);
  std::vector<double> iid(20000);
  for (auto& x : iid) x = rng.uniform01();
  CHECK(integrated_autocorrelation_time(iid) == doctest::Approx(1.0).epsilon(0.25));
  // AR(1) with coefficient 0.8: tau = (1 + 0.8) / (1 - 0.8) = 9
  std::vector<double> ar(200000);
  double x = 0;
  for (auto& v : ar) {
    x = 0.8 * x + (rng.uniform01() - 0.5);
    v = x;
  }
  CHECK(integrated_autocorrelation_time(ar) == doctest::Approx(9.0).epsilon(0.2));
}
