#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slicewalk/graph.hpp"
#include "slicewalk/graph_gen.hpp"

namespace slicewalk {

struct ExperimentConfig {
  std::string name;
  int n_side = 1000;
  int delta = 3;
  int k_x = 1;
  int k_y = 1;
  int k = 2;
  double lambda = 0.05;
  double gamma = 0.1;
  double ell = 2.0;
  double a = 0.4;
  double b = 0.4;
  double c = 0.6;
  int samples = 200;
  int runs = 100;
  std::uint64_t steps = 1000000;
  double tolerance = 0.15;  // relative bracket for the concentration prediction
  double ceiling = 0.01;    // event-frequency ceiling for the set-size experiment
  std::string mode = "both";  // slow mixing: exact, empirical, both
  bool regular = false;        // plain regular graphs instead of bipartite ones
  GenOptions gen;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;

  // Throws InvalidArgument with the offending key.
  void validate() const;
};

// Wilson score interval at 95%.
struct Frequency {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double rate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
Frequency make_frequency(std::uint64_t hits, std::uint64_t trials);

struct SizeProbe {
  int tau_size = 0;
  std::vector<int> uncovered;  // |Y \ N[tau]| per sample
  double mean = 0.0;
  Frequency hits;              // samples satisfying this probe's inequality
  double threshold = 0.0;      // right-hand side of the inequality (vertex count)
};

struct ConcentrationReport {
  int n_side = 0;
  int delta = 0;
  double alpha = 0.0;
  double prediction = 0.0;     // Delta^{-1/(2+gamma)} |Y|
  double exact_mean = 0.0;     // prod_i (1 - D|t| / (D|X| - i)) |Y|, pairing model
  SizeProbe at_alpha;          // hits: within (1 +- tolerance) of the prediction
  SizeProbe expansion;         // |tau| = ceil(1.2 alpha |X|); hits: <= (ell+1) log D / sqrt D |Y|
  SizeProbe anti_expansion;    // |tau| = floor(0.8 alpha |X|); hits: >= ell log D / sqrt D |Y|
  double anti_expansion_max_ell = 0.0;  // largest ell for which 95% of the anti-expansion probe holds
  std::string gen_method;
  std::string note;
};

ConcentrationReport experiment_neighborhood_concentration(const ExperimentConfig& cfg);

struct LargeSetReport {
  int n_side = 0;
  int delta = 0;
  int tau_size = 0;            // ceil(|X| / D^a)
  double threshold = 0.0;      // |Y| / D^b
  double mean_uncovered = 0.0;
  Frequency pass;
  double expected_uncovered = 0.0;  // pairing-model mean of |Y \ N[tau]| at tau_size
  bool insufficient_scale = false;  // alpha |X| < 2, or the expected uncovered count is below 2
  std::string gen_method;
};

LargeSetReport experiment_large_set_expansion(const ExperimentConfig& cfg);

struct SetSizeReport {
  int n_side = 0;
  int delta = 0;
  double lambda = 0.0;
  double alpha = 0.0;
  double size_threshold = 0.0;   // 4 lambda |V|
  double mean_size = 0.0;
  Frequency large_total;         // |I| >= 4 lambda |V| and I nonempty
  Frequency both_sides_large;    // |I n X| > alpha |X| and |I n Y| > alpha |Y|
  double ceiling = 0.0;
  bool pass = true;              // both rates <= ceiling
  std::optional<double> max_exact_marginal;  // small graphs: max_v Pr[v in I]
  double marginal_bound = 0.0;               // lambda / (1 + lambda)
  std::uint64_t sweeps = 0;
  std::string gen_method;
};

// Samples the hardcore model on a bipartite graph: heat-bath updates on the
// X-marginal lambda^{|S|} (1+lambda)^{|Y \ N(S)|}, then an exact product-form Y completion.
SetSizeReport experiment_independent_set_size(const ExperimentConfig& cfg);
SetSizeReport independent_set_size_on(const BipartiteGraph& g, const ExperimentConfig& cfg);

// Pr[v in I] under the hardcore model, exactly (|V| <= 40).
double exact_vertex_marginal(const Graph& g, int v, double lambda);

struct SlowMixingReport {
  int n_side = 0;  // per component
  int delta = 0;
  int k = 0;  // cfg.k, or the largest even k <= |X| / D^c when cfg.k <= 0
  double lambda = 0.0;
  // exact mode
  std::optional<std::size_t> facets;
  std::optional<double> mass_s;             // mu(S)
  std::optional<double> phi_s;              // conductance of S
  // edges of the Johnson graph leaving S / (k (|X|-k+1) min(|S|, |S^c|)); equals phi_s at lambda = 0
  std::optional<double> boundary_ratio;
  std::optional<double> within_conductance;  // min over S, S^c of (1 - lambda2)/2 of the restricted chain
  std::optional<double> factor;             // within_conductance / phi_s
  std::optional<double> control_phi;        // same S on a single connected graph
  std::optional<double> control_within;
  std::optional<double> control_factor;
  std::optional<double> theorem_shape;      // exp(-n / sqrt(D)), n = vertices per component
  std::optional<std::size_t> control_facets;
  // empirical mode
  int runs = 0;
  std::uint64_t steps = 0;
  std::uint64_t never_left = 0;
  std::vector<std::uint64_t> escape_times;  // first step with |tau n X(G1)| <= k/2, for runs that left
  double median_escape = 0.0;
  std::string gen_method;
};

SlowMixingReport experiment_slow_mixing(const ExperimentConfig& cfg);

struct RamanujanReport {
  int n_side = 0;  // bipartite side size, or vertex count for regular graphs
  int delta = 0;
  bool regular = false;
  double threshold = 0.0;  // 2 sqrt(D-1) + 0.2
  std::vector<double> lambda2;     // bipartite: lambda_2; regular: |lambda_min| and lambda_2 (max of the two)
  std::vector<double> residual;
  Frequency within;
  std::string gen_method;
};

RamanujanReport experiment_ramanujan(const ExperimentConfig& cfg);

struct CommonNeighborReport {
  int n_side = 0;
  int delta = 0;
  Frequency all_pairs_at_most_two;
  Frequency unique_doubles;
  std::vector<int> max_common;
  std::vector<long long> pairs_above_two;
  std::vector<long long> vertices_with_multiple_doubles;
  double expected_pairs_above_two = 0.0;  // Poisson heuristic over same-side pairs
  std::string gen_method;
};

CommonNeighborReport experiment_common_neighbors(const ExperimentConfig& cfg);

}  // namespace slicewalk
