#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slicewalk/error.hpp"
#include "slicewalk/graph_gen.hpp"
#include "slicewalk/spectra.hpp"

using namespace slicewalk;

TEST_CASE("cycle spectrum matches 2 cos(2 pi j / n)") {
  for (int n : {5, 6, 9}) {
    const Eigen::VectorXd ev = eigenvalues(adjacency_matrix(oracle::cycle(n)));
    std::vector<double> want;
    for (int j = 0; j < n; ++j) want.push_back(2.0 * std::cos(2.0 * M_PI * j / n));
    std::sort(want.begin(), want.end());
    for (int i = 0; i < n; ++i) CHECK(ev(i) == doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
  const auto s = graph_spectrum(oracle::bip_c6());
  CHECK(s.lambda1 == doctest::Approx(2.0));
  CHECK(s.lambda2 == doctest::Approx(1.0));
  CHECK(s.lambda_min == doctest::Approx(-2.0));
}

TEST_CASE("symmetric matrix construction checks symmetry") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 2, 0;
  CHECK_THROWS_AS(DenseSymMatrix{m}, InvalidArgument);
}

TEST_CASE("iterative and dense paths agree on regular graphs") {
  const auto g = gen_bipartite_regular(300, 3, 17);
  SpectraOptions dense;
  dense.method = SpectrumMethod::dense;
  SpectraOptions it;
  it.method = SpectrumMethod::iterative;
  const auto a = graph_spectrum(g, dense);
  const auto b = graph_spectrum(g, it);
  CHECK(a.lambda1 == doctest::Approx(3.0));
  CHECK(b.lambda2 == doctest::Approx(a.lambda2).epsilon(1e-6));
  CHECK(b.lambda_min == doctest::Approx(-3.0).epsilon(1e-6));

  const auto r = gen_regular(400, 4, 3);
  const auto c = graph_spectrum(r, dense);
  const auto d = graph_spectrum(r, it);
  CHECK(d.lambda2 == doctest::Approx(c.lambda2).epsilon(1e-6));
  CHECK(d.lambda_min == doctest::Approx(c.lambda_min).epsilon(1e-6));
}

TEST_CASE("psd dominance") {
  const auto i2 = DenseSymMatrix::identity(2);
  const auto z2 = DenseSymMatrix::zeros(2);
  CHECK(psd_dominance(z2, i2, 1e-12).holds);
  const auto r = psd_dominance(i2, z2, 1e-12);
  CHECK_FALSE(r.holds);
  CHECK(r.min_eigenvalue == doctest::Approx(-1.0));
}

TEST_CASE("complement eigenvalue checks") {
  const auto c6 = BipartiteRegularGraph(oracle::bip_c6());
  const auto r = complement_interlacing_check(c6);
  CHECK(r.holds);
  CHECK(r.lhs == doctest::Approx(1.0));  // perfect matching: eigenvalues +-1
  CHECK(r.rhs == doctest::Approx(1.0));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CHECK(complement_interlacing_check(gen_bipartite_regular(12, 3, seed)).holds);
    CHECK(complement_interlacing_check(gen_regular(14, 3, seed)).holds);
  }
}
