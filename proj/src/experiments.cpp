#include "slicewalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "slicewalk/counting.hpp"
#include "slicewalk/error.hpp"
#include "slicewalk/parallel.hpp"
#include "slicewalk/rng.hpp"
#include "slicewalk/slices.hpp"
#include "slicewalk/spectra.hpp"
#include "slicewalk/walks.hpp"

namespace slicewalk {

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw InvalidArgument("config: " + key + " " + what);
}

// Uniform t-subset of {0..n-1} by a partial Fisher-Yates shuffle.
std::vector<int> random_subset(int n, int t, Rng& rng, std::vector<int>& scratch) {
  scratch.resize(static_cast<std::size_t>(n));
  std::iota(scratch.begin(), scratch.end(), 0);
  for (int i = 0; i < t; ++i) {
    const int j = i + rng.uniform_int(n - i);
    std::swap(scratch[static_cast<std::size_t>(i)], scratch[static_cast<std::size_t>(j)]);
  }
  return {scratch.begin(), scratch.begin() + t};
}

int uncovered_count(const BipartiteGraph& g, const std::vector<int>& tau, std::vector<char>& covered) {
  covered.assign(static_cast<std::size_t>(g.y_count()), 0);
  for (int x : tau)
    for (int y : g.neighbors(Side::X, x)) covered[static_cast<std::size_t>(y)] = 1;
  return static_cast<int>(std::count(covered.begin(), covered.end(), 0));
}

// Mean of |Y \ N(tau)| for a fixed tau in the bipartite pairing model.
double pairing_uncovered_mean(int n_side, int degree, int tau_size) {
  const double total = static_cast<double>(degree) * n_side;
  const double hit = static_cast<double>(degree) * tau_size;
  double p = 1.0;
  for (int i = 0; i < degree; ++i) p *= std::max(0.0, 1.0 - hit / (total - i));
  return p * n_side;
}

double alpha_of(int degree, double gamma) {
  if (degree < 2) return 0.0;
  return std::min(1.0, std::log(static_cast<double>(degree)) / ((2.0 + gamma) * degree));
}

SizeProbe probe(const BipartiteGraph& g, int tau_size, int samples, std::uint64_t seed, std::uint64_t stream, int threads) {
  SizeProbe p;
  p.tau_size = tau_size;
  p.uncovered.assign(static_cast<std::size_t>(samples), 0);
  parallel_for(samples, threads, [&](int i) {
    Rng rng(derive_seed(seed, stream + static_cast<std::uint64_t>(i)));
    std::vector<int> scratch;
    std::vector<char> covered;
    const auto tau = random_subset(g.x_count(), tau_size, rng, scratch);
    p.uncovered[static_cast<std::size_t>(i)] = uncovered_count(g, tau, covered);
  });
  double sum = 0.0;
  for (int u : p.uncovered) sum += u;
  p.mean = samples > 0 ? sum / samples : 0.0;
  return p;
}

template <typename Pred>
void score(SizeProbe& p, Pred pred) {
  std::uint64_t hits = 0;
  for (int u : p.uncovered)
    if (pred(u)) ++hits;
  p.hits = make_frequency(hits, p.uncovered.size());
}

}  // namespace

void ExperimentConfig::validate() const {
  require(n_side >= 1, "n_side", "must be >= 1");
  require(delta >= 1, "delta", "must be >= 1");
  require(delta <= n_side, "delta", "must not exceed n_side");
  require(k_x >= 0 && k_y >= 0, "k_x/k_y", "must be >= 0");
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda", "must be finite and >= 0");
  require(gamma >= 0.0, "gamma", "must be >= 0");
  require(ell > 0.0, "ell", "must be > 0");
  require(a > 0.0 && a < 1.0, "a", "must lie in (0, 1)");
  require(b > 0.0 && b < 1.0, "b", "must lie in (0, 1)");
  require(c > 0.5 && c < 1.0, "c", "must lie in (1/2, 1)");
  require(samples >= 1, "samples", "must be >= 1");
  require(runs >= 0, "runs", "must be >= 0");
  require(tolerance > 0.0, "tolerance", "must be > 0");
  require(ceiling >= 0.0 && ceiling <= 1.0, "ceiling", "must lie in [0, 1]");
  require(mode == "exact" || mode == "empirical" || mode == "both", "mode", "must be exact, empirical or both");
  require(threads >= 0, "threads", "must be >= 0");
}

Frequency make_frequency(std::uint64_t hits, std::uint64_t trials) {
  Frequency f;
  f.hits = hits;
  f.trials = trials;
  if (trials == 0) return f;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z = 1.959963984540054;
  const double den = 1.0 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / den;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den;
  f.rate = p;
  f.lo = hits == 0 ? 0.0 : std::max(0.0, centre - half);
  f.hi = hits == trials ? 1.0 : std::min(1.0, centre + half);
  return f;
}

ConcentrationReport experiment_neighborhood_concentration(const ExperimentConfig& cfg) {
  cfg.validate();
  ConcentrationReport r;
  r.n_side = cfg.n_side;
  r.delta = cfg.delta;
  r.alpha = alpha_of(cfg.delta, cfg.gamma);
  require(r.alpha * cfg.n_side >= 1.0, "n_side", "too small: alpha * n_side < 1");
  GenStats st;
  const auto g = gen_bipartite_regular(cfg.n_side, cfg.delta, cfg.seed, cfg.gen, &st);
  r.gen_method = to_string(st.used);

  const double n = cfg.n_side;
  const double d = cfg.delta;
  const double unit = std::log(d) / std::sqrt(d) * n;
  const int t0 = static_cast<int>(std::floor(r.alpha * n + 1e-9));
  const int t_hi = std::min(cfg.n_side, static_cast<int>(std::ceil(1.2 * r.alpha * n - 1e-9)));
  const int t_lo = static_cast<int>(std::floor(0.8 * r.alpha * n + 1e-9));

  r.prediction = std::pow(d, -1.0 / (2.0 + cfg.gamma)) * n;
  r.exact_mean = pairing_uncovered_mean(cfg.n_side, cfg.delta, t0);

  r.at_alpha = probe(g, t0, cfg.samples, cfg.seed, 1'000'000, cfg.threads);
  r.at_alpha.threshold = r.prediction;
  score(r.at_alpha, [&](int u) { return std::abs(u - r.prediction) <= cfg.tolerance * r.prediction; });

  r.expansion = probe(g, t_hi, cfg.samples, cfg.seed, 2'000'000, cfg.threads);
  r.expansion.threshold = (cfg.ell + 1.0) * unit;
  score(r.expansion, [&](int u) { return u <= r.expansion.threshold; });

  r.anti_expansion = probe(g, t_lo, cfg.samples, cfg.seed, 3'000'000, cfg.threads);
  r.anti_expansion.threshold = cfg.ell * unit;
  score(r.anti_expansion, [&](int u) { return u >= r.anti_expansion.threshold; });

  // 5th percentile of the anti-expansion probe, in units of log D / sqrt D |Y|
  std::vector<int> sorted = r.anti_expansion.uncovered;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t q = sorted.size() / 20;
  r.anti_expansion_max_ell = sorted.empty() ? 0.0 : sorted[q] / unit;
  r.note = "sampled tau only; the statement for every tau is not checked";
  return r;
}

LargeSetReport experiment_large_set_expansion(const ExperimentConfig& cfg) {
  cfg.validate();
  LargeSetReport r;
  r.n_side = cfg.n_side;
  r.delta = cfg.delta;
  const double n = cfg.n_side;
  const double d = cfg.delta;
  r.tau_size = std::min(cfg.n_side, static_cast<int>(std::ceil(n / std::pow(d, cfg.a) - 1e-9)));
  r.threshold = n / std::pow(d, cfg.b);
  r.expected_uncovered = pairing_uncovered_mean(cfg.n_side, cfg.delta, r.tau_size);
  r.insufficient_scale = alpha_of(cfg.delta, cfg.gamma) * n < 2.0 || r.expected_uncovered < 2.0;

  GenStats st;
  const auto g = gen_bipartite_regular(cfg.n_side, cfg.delta, cfg.seed, cfg.gen, &st);
  r.gen_method = to_string(st.used);
  SizeProbe p = probe(g, r.tau_size, cfg.samples, cfg.seed, 1'000'000, cfg.threads);
  score(p, [&](int u) { return u < r.threshold; });
  r.mean_uncovered = p.mean;
  r.pass = p.hits;
  return r;
}

SetSizeReport independent_set_size_on(const BipartiteGraph& g, const ExperimentConfig& cfg) {
  SetSizeReport r;
  r.n_side = g.x_count();
  r.delta = g.regular_degree().value_or(0);
  r.lambda = cfg.lambda;
  r.alpha = alpha_of(r.delta, cfg.gamma);
  const int nx = g.x_count();
  const int ny = g.y_count();
  r.size_threshold = 4.0 * cfg.lambda * (nx + ny);
  r.ceiling = cfg.ceiling;
  r.marginal_bound = cfg.lambda / (1.0 + cfg.lambda);

  const double lam = cfg.lambda;
  int max_deg = 0;
  for (int x = 0; x < nx; ++x) max_deg = std::max(max_deg, g.degree(Side::X, x));
  std::vector<double> inv_pow(static_cast<std::size_t>(max_deg) + 1);
  for (int j = 0; j <= max_deg; ++j) inv_pow[static_cast<std::size_t>(j)] = std::pow(1.0 + lam, -j);

  Rng rng(derive_seed(cfg.seed, 7));
  std::vector<char> in_x(static_cast<std::size_t>(nx), 0);
  std::vector<int> cover(static_cast<std::size_t>(ny), 0);
  const double p_y = lam / (1.0 + lam);

  auto sweep = [&] {
    for (int s = 0; s < nx; ++s) {
      const int x = rng.uniform_int(nx);
      int fresh = 0;  // neighbors covered by nobody else
      for (int y : g.neighbors(Side::X, x)) {
        const int c = cover[static_cast<std::size_t>(y)] - (in_x[static_cast<std::size_t>(x)] ? 1 : 0);
        if (c == 0) ++fresh;
      }
      const double ratio = lam * inv_pow[static_cast<std::size_t>(fresh)];
      const bool want = rng.uniform01() * (1.0 + ratio) < ratio;
      if (want != static_cast<bool>(in_x[static_cast<std::size_t>(x)])) {
        in_x[static_cast<std::size_t>(x)] = want ? 1 : 0;
        for (int y : g.neighbors(Side::X, x)) cover[static_cast<std::size_t>(y)] += want ? 1 : -1;
      }
    }
    ++r.sweeps;
  };

  for (int i = 0; i < 100; ++i) sweep();
  std::uint64_t large = 0, both = 0;
  double size_sum = 0.0;
  for (int s = 0; s < cfg.samples; ++s) {
    sweep();
    int sx = 0, sy = 0;
    for (char c : in_x) sx += c;
    for (int y = 0; y < ny; ++y)
      if (cover[static_cast<std::size_t>(y)] == 0 && rng.uniform01() < p_y) ++sy;
    const int total = sx + sy;
    size_sum += total;
    if (total > 0 && total >= r.size_threshold) ++large;
    if (sx > r.alpha * nx && sy > r.alpha * ny) ++both;
  }
  r.mean_size = size_sum / cfg.samples;
  r.large_total = make_frequency(large, static_cast<std::uint64_t>(cfg.samples));
  r.both_sides_large = make_frequency(both, static_cast<std::uint64_t>(cfg.samples));
  r.pass = r.large_total.rate <= cfg.ceiling && r.both_sides_large.rate <= cfg.ceiling;

  if (nx + ny <= 40) {
    const Graph plain = g.as_graph();
    double worst = 0.0;
    for (int v = 0; v < plain.vertex_count(); ++v) worst = std::max(worst, exact_vertex_marginal(plain, v, lam));
    r.max_exact_marginal = worst;
  }
  return r;
}

SetSizeReport experiment_independent_set_size(const ExperimentConfig& cfg) {
  cfg.validate();
  GenStats st;
  const auto g = gen_bipartite_regular(cfg.n_side, cfg.delta, cfg.seed, cfg.gen, &st);
  SetSizeReport r = independent_set_size_on(g, cfg);
  r.gen_method = to_string(st.used);
  return r;
}

double exact_vertex_marginal(const Graph& g, int v, double lambda) {
  if (v < 0 || v >= g.vertex_count()) throw InvalidArgument("exact_vertex_marginal: vertex out of range");
  if (g.vertex_count() > 40) throw CapExceeded("exact_vertex_marginal: more than 40 vertices");
  if (lambda == 0.0) return 0.0;
  VertexSet rest;
  for (int u = 0; u < g.vertex_count(); ++u)
    if (u != v && !g.has_edge(u, v)) rest.push_back(u);
  const long double z = exact_partition(g, lambda, 40);
  const long double z_out = exact_partition(induced_subgraph(g, rest).graph, lambda, 40);
  return static_cast<double>(static_cast<long double>(lambda) * z_out / z);
}

namespace {

struct CutMeasures {
  double phi = 0.0;
  double boundary_ratio = 0.0;
  double within = 0.0;
  double mass = 0.0;
};

// Chain restricted to `keep`, rejected moves folded into the diagonal.
double restricted_half_gap(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi, const std::vector<int>& keep) {
  const int m = static_cast<int>(keep.size());
  if (m <= 1) return 0.5;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd w(m);
  for (int i = 0; i < m; ++i) {
    double kept = 0.0;
    for (int j = 0; j < m; ++j) {
      q(i, j) = p(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
      kept += q(i, j);
    }
    q(i, i) += 1.0 - kept;
    w(i) = pi(keep[static_cast<std::size_t>(i)]);
  }
  w /= w.sum();
  return (1.0 - spectral_gap(q, w).lambda2) / 2.0;
}

CutMeasures cut_measures(const OneSidedSlice& slice, int n_first) {
  const FacetDistribution dist = exact_distribution(slice);
  const auto& facets = dist.facets;
  const Eigen::MatrixXd p = exact_transition_matrix(slice, false);
  const int k = slice.k();
  const std::size_t m = facets.size();
  Eigen::VectorXd pi(static_cast<Eigen::Index>(m));
  std::vector<char> in_s(m, 0);
  std::vector<int> s_idx, c_idx;
  for (std::size_t i = 0; i < m; ++i) {
    pi(static_cast<Eigen::Index>(i)) = dist.prob[i];
    const auto inside = std::count_if(facets[i].begin(), facets[i].end(), [&](int x) { return x < n_first; });
    in_s[i] = 2 * inside > k ? 1 : 0;
    (in_s[i] ? s_idx : c_idx).push_back(static_cast<int>(i));
  }
  CutMeasures c;
  double flow = 0.0, mass_s = 0.0;
  for (int i : s_idx) {
    mass_s += pi(i);
    for (int j : c_idx) flow += pi(i) * p(i, j);
  }
  c.mass = mass_s;
  const double small = std::min(mass_s, 1.0 - mass_s);
  c.phi = small > 0.0 ? flow / small : 0.0;

  // Johnson-graph edges: facets differing in one element
  long long edges = 0;
  for (int i : s_idx)
    for (int j : c_idx) {
      const auto& a = facets[static_cast<std::size_t>(i)];
      const auto& b = facets[static_cast<std::size_t>(j)];
      if (intersection_size(a, b) == k - 1) ++edges;
    }
  const double ground = slice.ground_size();
  const double small_count = static_cast<double>(std::min(s_idx.size(), c_idx.size()));
  c.boundary_ratio = small_count > 0 ? edges / (k * (ground - k + 1) * small_count) : 0.0;

  c.within = std::min(restricted_half_gap(p, pi, s_idx), restricted_half_gap(p, pi, c_idx));
  return c;
}

}  // namespace

SlowMixingReport experiment_slow_mixing(const ExperimentConfig& cfg) {
  cfg.validate();
  SlowMixingReport r;
  r.n_side = cfg.n_side;
  r.delta = cfg.delta;
  r.lambda = cfg.lambda;
  int k = cfg.k;
  if (k <= 0) {
    k = static_cast<int>(std::floor(2.0 * cfg.n_side / std::pow(cfg.delta, cfg.c)));
    k -= k % 2;
  }
  require(k >= 2 && k % 2 == 0, "k", "must be even and >= 2");
  require(k <= 2 * cfg.n_side, "k", "must not exceed |X|");
  r.k = k;

  GenStats st;
  const auto g1 = gen_bipartite_regular(cfg.n_side, cfg.delta, derive_seed(cfg.seed, 0), cfg.gen, &st);
  const auto g2 = gen_bipartite_regular(cfg.n_side, cfg.delta, derive_seed(cfg.seed, 1), cfg.gen);
  r.gen_method = to_string(st.used);
  auto g = std::make_shared<const BipartiteGraph>(disjoint_union(g1, g2));
  auto slice = std::make_shared<const OneSidedSlice>(g, k, cfg.lambda);

  if (cfg.mode != "empirical") {
    const auto cm = cut_measures(*slice, cfg.n_side);
    r.facets = enumerate_facets(*slice).size();
    r.mass_s = cm.mass;
    r.phi_s = cm.phi;
    r.boundary_ratio = cm.boundary_ratio;
    r.within_conductance = cm.within;
    r.factor = cm.phi > 0.0 ? cm.within / cm.phi : std::numeric_limits<double>::infinity();

    auto joined = std::make_shared<const BipartiteGraph>(
        gen_bipartite_regular(2 * cfg.n_side, cfg.delta, derive_seed(cfg.seed, 2), cfg.gen));
    const OneSidedSlice control(joined, k, cfg.lambda);
    const auto cc = cut_measures(control, cfg.n_side);
    r.control_facets = enumerate_facets(control).size();
    r.control_phi = cc.phi;
    r.control_within = cc.within;
    r.control_factor = cc.phi > 0.0 ? cc.within / cc.phi : std::numeric_limits<double>::infinity();
    r.theorem_shape = std::exp(-2.0 * cfg.n_side / std::sqrt(static_cast<double>(cfg.delta)));
  }

  if (cfg.mode != "exact") {
    r.runs = cfg.runs;
    r.steps = cfg.steps;
    std::vector<std::uint64_t> escape(static_cast<std::size_t>(cfg.runs), 0);
    std::vector<char> left(static_cast<std::size_t>(cfg.runs), 0);
    parallel_for(cfg.runs, cfg.threads, [&](int run) {
      Rng rng(derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(run)));
      std::vector<int> scratch;
      Facet start = random_subset(cfg.n_side, k, rng, scratch);
      std::sort(start.begin(), start.end());
      auto chain = make_chain(slice, start);
      for (std::uint64_t t = 1; t <= cfg.steps; ++t) {
        chain->lazy_step(rng);
        int inside = 0;
        for (int x = 0; x < cfg.n_side; ++x) inside += chain->contains(x) ? 1 : 0;
        if (2 * inside <= k) {
          escape[static_cast<std::size_t>(run)] = t;
          left[static_cast<std::size_t>(run)] = 1;
          return;
        }
      }
    });
    for (int i = 0; i < cfg.runs; ++i) {
      if (left[static_cast<std::size_t>(i)])
        r.escape_times.push_back(escape[static_cast<std::size_t>(i)]);
      else
        ++r.never_left;
    }
    if (!r.escape_times.empty()) {
      std::vector<std::uint64_t> s = r.escape_times;
      std::sort(s.begin(), s.end());
      const std::size_t h = s.size() / 2;
      r.median_escape = s.size() % 2 ? static_cast<double>(s[h]) : 0.5 * (static_cast<double>(s[h - 1]) + s[h]);
    }
  }
  return r;
}

RamanujanReport experiment_ramanujan(const ExperimentConfig& cfg) {
  cfg.validate();
  RamanujanReport r;
  r.n_side = cfg.n_side;
  r.delta = cfg.delta;
  r.regular = cfg.regular;
  r.threshold = 2.0 * std::sqrt(cfg.delta - 1.0) + 0.2;
  const int m = cfg.samples;
  r.lambda2.assign(static_cast<std::size_t>(m), 0.0);
  r.residual.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<std::string> methods(static_cast<std::size_t>(m));
  parallel_for(m, cfg.threads, [&](int i) {
    GenStats st;
    SpectrumSummary s;
    const auto seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    if (cfg.regular) {
      const auto g = gen_regular(cfg.n_side, cfg.delta, seed, cfg.gen, &st);
      s = graph_spectrum(static_cast<const Graph&>(g));
      r.lambda2[static_cast<std::size_t>(i)] = std::max(s.lambda2, std::abs(s.lambda_min));
    } else {
      const auto g = gen_bipartite_regular(cfg.n_side, cfg.delta, seed, cfg.gen, &st);
      s = graph_spectrum(static_cast<const BipartiteGraph&>(g));
      r.lambda2[static_cast<std::size_t>(i)] = s.lambda2;
    }
    r.residual[static_cast<std::size_t>(i)] = s.residual;
    methods[static_cast<std::size_t>(i)] = to_string(st.used);
  });
  std::uint64_t ok = 0;
  for (double l : r.lambda2)
    if (l <= r.threshold) ++ok;
  r.within = make_frequency(ok, static_cast<std::uint64_t>(m));
  r.gen_method = methods.empty() ? "" : methods.front();
  for (const auto& s : methods)
    if (s != r.gen_method) r.gen_method = "mixed";
  return r;
}

CommonNeighborReport experiment_common_neighbors(const ExperimentConfig& cfg) {
  cfg.validate();
  CommonNeighborReport r;
  r.n_side = cfg.n_side;
  r.delta = cfg.delta;
  const int m = cfg.samples;
  std::vector<CommonNeighborStats> stats(static_cast<std::size_t>(m));
  std::vector<std::string> methods(static_cast<std::size_t>(m));
  parallel_for(m, cfg.threads, [&](int i) {
    GenStats st;
    const auto g = gen_bipartite_regular(cfg.n_side, cfg.delta, derive_seed(cfg.seed, static_cast<std::uint64_t>(i)),
                                         cfg.gen, &st);
    stats[static_cast<std::size_t>(i)] = common_neighbor_stats(g);
    methods[static_cast<std::size_t>(i)] = to_string(st.used);
  });
  std::uint64_t two = 0, uniq = 0;
  for (const auto& s : stats) {
    r.max_common.push_back(s.max_common);
    r.pairs_above_two.push_back(s.pairs_above_two);
    r.vertices_with_multiple_doubles.push_back(s.vertices_with_multiple_doubles);
    if (s.at_most_two()) ++two;
    if (s.unique_doubles()) ++uniq;
  }
  r.all_pairs_at_most_two = make_frequency(two, static_cast<std::uint64_t>(m));
  r.unique_doubles = make_frequency(uniq, static_cast<std::uint64_t>(m));

  // co-degree of a same-side pair is roughly Poisson(D^2 / n)
  const double n = cfg.n_side;
  const double mu = static_cast<double>(cfg.delta) * cfg.delta / n;
  double term = std::exp(-mu) * mu * mu * mu / 6.0, p3 = 0.0;
  for (int j = 3; j < 200 && term > 0.0; ++j) {
    p3 += term;
    term *= mu / (j + 1);
  }
  r.expected_pairs_above_two = 2.0 * (n * (n - 1) / 2.0) * p3;
  r.gen_method = methods.empty() ? "" : methods.front();
  for (const auto& s : methods)
    if (s != r.gen_method) r.gen_method = "mixed";
  return r;
}

}  // namespace slicewalk
