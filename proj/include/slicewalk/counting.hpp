#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicewalk/graph.hpp"
#include "slicewalk/slices.hpp"

namespace slicewalk {

struct CountingOptions {
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 0;
  double chain_constant = 20.0;   // burn-in = C * free slots * |V| * ln(1/eps) steps
  double pilot_factor = 10.0;     // pilot = factor * m ln m samples, m = unpinned elements
  int repetitions = 0;            // 0: ceil(12 ln(1/delta))
  int threads = 0;                // 0: hardware concurrency
  std::uint64_t max_samples_per_level = 20000000;
  bool lazy = true;
};

struct TraceEntry {
  int pinned = -1;           // element pinned at this level
  double marginal = 0.0;     // estimated Pr[pinned in facet | earlier pins]
  double pilot_marginal = 0.0;
  std::uint64_t samples = 0;  // main-run samples at this level
  double autocorrelation_time = 1.0;
};

struct CountEstimate {
  double log_estimate = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  int repetitions = 0;
  std::uint64_t samples = 0;           // over all repetitions and levels
  double base_log_weight = 0.0;        // exact log weight of the fully pinned facet
  std::vector<TraceEntry> trace;       // of the median repetition
  std::vector<double> repetition_logs;  // per repetition, in seed order

  double estimate() const;
};

// |I_{k_x,k_y}(G)| by telescoping over links with a down-up walk in each link.
CountEstimate estimate_two_sided_count(const BipartiteGraph& g, int k_x, int k_y, const CountingOptions& opt);
// Z_k = sum over k-subsets S of X of lambda^k (1+lambda)^{|Y \ N(S)|}.
CountEstimate estimate_one_sided_partition(const BipartiteGraph& g, int k, double lambda, const CountingOptions& opt);
// Generic telescoping estimate of the total weight of a slice (relative to
// log_weight, plus base_log of the final facet computed by the caller).
CountEstimate estimate_slice_weight(const Slice& slice, const CountingOptions& opt);

struct ThresholdParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.1;
  double ell = 2.0;
  double lambda = 0.0;
  int degree = 0;
  bool bands_degenerate = false;  // beta <= alpha: both bands are empty
};

// alpha = ln(Delta) / ((2+gamma) Delta), beta = 4 lambda, clamped to (0, 1].
ThresholdParams thresholds(int degree, double lambda, double gamma = 0.1, double ell = 2.0);
// Explicit band edges, e.g. widened to the full range for oracle comparisons.
ThresholdParams custom_thresholds(double alpha, double beta, double lambda);

struct BandTerm {
  std::string kind;  // "both_small", "x_band", "y_band"
  int k_lo = 0;      // inclusive size range of the term (k_x for both_small, ...)
  int k_hi = 0;
  int k_y_lo = 0;    // both_small only
  int k_y_hi = 0;
  double value_log = 0.0;
  std::uint64_t samples = 0;
};

struct PartitionHatEstimate {
  double log_estimate = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  ThresholdParams thresholds;
  std::vector<BandTerm> bands;
  std::uint64_t samples = 0;
  double estimate() const;
};

// Z-hat: sets with both sides small (counted by two-sided slices), plus the
// X and Y one-sided bands. Sets with both sides inside the band are counted twice.
PartitionHatEstimate estimate_partition_hat(const BipartiteGraph& g, double lambda, const ThresholdParams& t,
                                            const CountingOptions& opt);

// ---- exact oracles -------------------------------------------------------------

// Hardcore partition function by branching on a max-degree vertex, splitting
// components and memoizing on vertex subsets. Throws CapExceeded above `cap` vertices.
long double exact_partition(const Graph& g, double lambda, int cap = 40);
long double exact_partition(const BipartiteGraph& g, double lambda, int cap = 40);

// |I_{k_x,k_y}(G)|; enumerates k_x-subsets of X.
long double exact_slice_count(const BipartiteGraph& g, int k_x, int k_y, std::uint64_t cap = 50000000);
// Z_k exactly, by enumerating k-subsets of X.
long double exact_one_sided_partition(const BipartiteGraph& g, int k, double lambda, std::uint64_t cap = 50000000);

// profile[a][b] = number of independent sets with a vertices in X and b in Y.
std::vector<std::vector<long double>> size_profile(const BipartiteGraph& g, int max_x = 24);

struct HatDecomposition {
  long double z = 0.0;             // exact partition function
  long double z_hat = 0.0;         // exact value of the Z-hat sum
  long double double_counted = 0.0;  // both sides inside (alpha, beta]
  long double dropped = 0.0;       // sets counted by no term
};

HatDecomposition exact_partition_hat(const BipartiteGraph& g, double lambda, const ThresholdParams& t);

// Term index ranges used by Z-hat: sizes 0..floor(alpha n) and floor(alpha n)+1..floor(beta n).
int alpha_cut(double alpha, int n);
int beta_cut(double beta, int n);

// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

}  // namespace slicewalk
