#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "slicewalk/rng.hpp"
#include "slicewalk/slices.hpp"

namespace slicewalk {

// Current facet of a down-up walk plus the counters that make a step O(degree)
// (two-sided and regular) or O(|X|) (one-sided).
class ChainState {
 public:
  virtual ~ChainState() = default;

  // One down-up transition: drop a uniform unpinned element, then add a
  // replacement drawn from the conditional facet weights (the dropped element
  // is always a candidate).
  virtual void step(Rng& rng) = 0;

  // Lazy step: stays put with probability 1/2.
  void lazy_step(Rng& rng) {
    if (rng.coin()) step(rng);
  }

  Facet facet() const;
  bool contains(int e) const { return in_[static_cast<std::size_t>(e)] != 0; }
  const Slice& slice() const { return *slice_; }
  std::uint64_t steps() const { return steps_; }
  // Counters recomputed from scratch agree with the incremental ones.
  virtual bool counters_consistent() const = 0;

 protected:
  ChainState(SlicePtr slice, const Facet& initial);
  void remove_at(std::size_t free_pos);
  void insert(int e);

  SlicePtr slice_;
  std::vector<int> members_;  // pinned first, then the free elements in arbitrary order
  std::vector<char> in_;      // membership over the ground set
  std::size_t pinned_count_ = 0;
  std::uint64_t steps_ = 0;
};

// Throws InvalidArgument if `initial` is not a facet of the slice.
std::unique_ptr<ChainState> make_chain(SlicePtr slice, const Facet& initial);

// One-sided: pinned face plus a uniform subset of the rest. Others: randomized
// greedy insertion with restarts; throws BudgetExhausted after `budget` tries.
Facet greedy_initial_state(const Slice& slice, Rng& rng, int budget = 100);

// Row-stochastic down-up matrix over enumerate_facets(slice) order.
Eigen::MatrixXd exact_transition_matrix(const Slice& slice, bool lazy = false,
                                        std::size_t cap = kDefaultEnumerationCap);

struct GapInfo {
  double lambda2 = 0.0;
  double lambda_star = 0.0;  // max(|lambda_2|, |lambda_min|)
  double gap = 0.0;          // 1 - lambda2
};

// Spectrum of the pi-symmetrized chain. Throws InvalidArgument when the chain
// is not reversible with respect to pi (tolerance 1e-10).
GapInfo spectral_gap(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi);
// Largest |pi(a)P(a,b) - pi(b)P(b,a)|.
double detailed_balance_defect(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi);
// Number of communicating classes of the transition graph (positive entries).
int communicating_classes(const Eigen::MatrixXd& p);

// (1/2) sum |p - q|. The first argument may hold raw counts; it is normalized.
double tv_distance(const std::vector<double>& empirical, const std::vector<double>& exact);

struct ChainConfig {
  std::uint64_t steps = 0;
  bool lazy = true;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> burn_in;   // default steps / 2
  std::optional<std::uint64_t> thinning;  // default facet size (at least 1)
};

struct MixingReport {
  std::uint64_t steps = 0;
  std::uint64_t samples = 0;
  std::uint64_t distinct = 0;       // distinct facets among the samples
  std::optional<double> tv;         // against exact_distribution, when enumerable
  std::optional<GapInfo> gap;       // of the exact chain, when enumerable
  double mean_observable = 0.0;     // observable: sum of element ids of the facet
  double autocorrelation_time = 1.0;  // of the observable across samples (batch means)
};

struct RunOptions {
  // Oracle comparisons are attempted when the slice has at most this many facets.
  std::size_t oracle_cap = 2000;
  bool keep_samples = true;
  std::function<void(const Facet&)> on_sample;
};

struct RunResult {
  Facet initial;
  std::vector<Facet> samples;
  MixingReport report;
};

// Runs from `initial` (or a greedy start when empty and the slice is nonempty).
RunResult run_chain(SlicePtr slice, const ChainConfig& config, const RunOptions& opt = {},
                    std::optional<Facet> initial = std::nullopt);

// Integrated autocorrelation time of a scalar series via batch means.
double integrated_autocorrelation_time(const std::vector<double>& series);

}  // namespace slicewalk
