#include "slicewalk/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "slicewalk/error.hpp"
#include "slicewalk/parallel.hpp"
#include "slicewalk/rng.hpp"
#include "slicewalk/walks.hpp"

namespace slicewalk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_accuracy(const CountingOptions& opt) {
  if (!(opt.epsilon > 0.0 && opt.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (!(opt.delta > 0.0 && opt.delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
  if (opt.chain_constant <= 0.0 || opt.pilot_factor <= 0.0) throw InvalidArgument("chain and pilot constants must be positive");
}

int repetition_count(const CountingOptions& opt) {
  if (opt.repetitions > 0) return opt.repetitions;
  return std::max(1, static_cast<int>(std::ceil(12.0 * std::log(1.0 / opt.delta))));
}

struct RepResult {
  double log_estimate = 0.0;
  double base_log = 0.0;
  std::uint64_t samples = 0;
  std::vector<TraceEntry> trace;
};

// One pass of the telescoping product.
RepResult telescoping_run(const Slice& root, const CountingOptions& opt, std::uint64_t seed) {
  Rng rng(seed);
  RepResult out;
  Facet tau = root.pinned();
  Facet state = greedy_initial_state(root, rng);
  const int d = root.free_size();
  const double ln_inv_eps = std::log(1.0 / opt.epsilon);
  double log_prod = 0.0;

  while (static_cast<int>(tau.size()) < root.facet_size()) {
    SlicePtr slice = root.with_pinned(tau);
    const int f = slice->free_size();
    const int m = slice->ground_size() - static_cast<int>(tau.size());
    if (m == f && slice->kind() == SliceKind::one_sided) {
      // every remaining element is forced; marginals are 1
      tau = state;
      break;
    }
    auto chain = make_chain(slice, state);
    auto advance = [&](std::uint64_t n) {
      for (std::uint64_t i = 0; i < n; ++i) {
        if (opt.lazy) chain->lazy_step(rng);
        else chain->step(rng);
      }
    };
    const auto burn = static_cast<std::uint64_t>(
        std::ceil(opt.chain_constant * f * slice->ground_size() * std::max(ln_inv_eps, 1.0)));
    const auto thin = static_cast<std::uint64_t>(std::max(f, 1));
    const auto pilot_n = static_cast<std::uint64_t>(
        std::ceil(opt.pilot_factor * m * std::log(std::max(m, 3))));
    advance(burn);

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(slice->ground_size()), 0);
    std::vector<Facet> pilot;
    pilot.reserve(pilot_n);
    for (std::uint64_t i = 0; i < pilot_n; ++i) {
      advance(thin);
      Facet cur = chain->facet();
      for (int e : cur) ++counts[static_cast<std::size_t>(e)];
      pilot.push_back(std::move(cur));
    }
    int v = -1;
    for (int e = 0; e < slice->ground_size(); ++e) {
      if (std::binary_search(tau.begin(), tau.end(), e)) continue;
      if (v < 0 || counts[static_cast<std::size_t>(e)] > counts[static_cast<std::size_t>(v)]) v = e;
    }
    std::vector<double> series;
    series.reserve(pilot.size());
    for (const auto& s : pilot) series.push_back(std::binary_search(s.begin(), s.end(), v) ? 1.0 : 0.0);
    const double iat = std::clamp(integrated_autocorrelation_time(series), 1.0, 1000.0);
    const double p0 = static_cast<double>(counts[static_cast<std::size_t>(v)]) / static_cast<double>(pilot_n);

    // Chebyshev on the product: each level gets relative variance eps^2 / (4d).
    double want = iat * 4.0 * d * (1.0 - p0) / (p0 * opt.epsilon * opt.epsilon);
    want = std::clamp(want, 100.0, static_cast<double>(opt.max_samples_per_level));
    std::uint64_t n = static_cast<std::uint64_t>(std::ceil(want));
    std::uint64_t hits = 0, taken = 0;
    Facet with_v;
    for (;;) {
      for (; taken < n; ++taken) {
        advance(thin);
        if (chain->contains(v)) {
          ++hits;
          if (with_v.empty() || (taken & 63) == 0) with_v = chain->facet();
        }
      }
      if (hits > 0) break;
      if (n >= opt.max_samples_per_level) throw BudgetExhausted("marginal estimate is zero; sample budget exhausted");
      n = std::min<std::uint64_t>(2 * n, opt.max_samples_per_level);
    }
    const double p = static_cast<double>(hits) / static_cast<double>(taken);
    log_prod += std::log(p);
    out.samples += taken + pilot_n;
    out.trace.push_back({v, p, p0, taken, iat});
    tau.insert(std::upper_bound(tau.begin(), tau.end(), v), v);
    state = std::move(with_v);
  }
  out.base_log = root.log_weight(tau);
  out.log_estimate = out.base_log - log_prod;
  (void)d;
  return out;
}

}  // namespace

double CountEstimate::estimate() const { return std::exp(log_estimate); }
double PartitionHatEstimate::estimate() const { return std::exp(log_estimate); }

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

CountEstimate estimate_slice_weight(const Slice& slice, const CountingOptions& opt) {
  check_accuracy(opt);
  CountEstimate est;
  est.epsilon = opt.epsilon;
  est.delta = opt.delta;
  if (slice.free_size() == 0) {
    est.base_log_weight = slice.log_weight(slice.pinned());
    est.log_estimate = est.base_log_weight;
    return est;
  }
  {
    Rng probe(derive_seed(opt.seed, 0xfacade));
    try {
      (void)greedy_initial_state(slice, probe);
    } catch (const BudgetExhausted&) {
      if (!has_facet(slice)) throw EmptyLink("slice has no facet");
      throw;
    }
  }
  const int reps = repetition_count(opt);
  std::vector<RepResult> results(static_cast<std::size_t>(reps));
  parallel_for(reps, opt.threads, [&](int i) {
    results[static_cast<std::size_t>(i)] = telescoping_run(slice, opt, derive_seed(opt.seed, static_cast<std::uint64_t>(i)));
  });
  std::vector<int> order(static_cast<std::size_t>(reps));
  for (int i = 0; i < reps; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return results[static_cast<std::size_t>(a)].log_estimate < results[static_cast<std::size_t>(b)].log_estimate;
  });
  const RepResult& med = results[static_cast<std::size_t>(order[static_cast<std::size_t>((reps - 1) / 2)])];
  est.log_estimate = med.log_estimate;
  est.base_log_weight = med.base_log;
  est.trace = med.trace;
  est.repetitions = reps;
  for (const auto& r : results) {
    est.samples += r.samples;
    est.repetition_logs.push_back(r.log_estimate);
  }
  return est;
}

CountEstimate estimate_two_sided_count(const BipartiteGraph& g, int k_x, int k_y, const CountingOptions& opt) {
  check_accuracy(opt);
  auto gp = std::make_shared<const BipartiteGraph>(g);
  TwoSidedSlice slice(gp, k_x, k_y);
  return estimate_slice_weight(slice, opt);
}

CountEstimate estimate_one_sided_partition(const BipartiteGraph& g, int k, double lambda, const CountingOptions& opt) {
  check_accuracy(opt);
  auto gp = std::make_shared<const BipartiteGraph>(g);
  OneSidedSlice slice(gp, k, lambda);
  CountEstimate est = estimate_slice_weight(slice, opt);
  // the slice weight omits the common factor lambda^k
  const double shift = k == 0 ? 0.0 : (lambda > 0.0 ? k * std::log(lambda) : kNegInf);
  est.log_estimate += shift;
  est.base_log_weight += shift;
  for (double& r : est.repetition_logs) r += shift;
  return est;
}

// ---- thresholds -------------------------------------------------------------------

ThresholdParams thresholds(int degree, double lambda, double gamma, double ell) {
  if (degree < 3) throw InvalidArgument("thresholds need degree >= 3");
  if (!(lambda > 0.0)) throw InvalidArgument("thresholds need lambda > 0");
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be nonnegative");
  ThresholdParams t;
  t.degree = degree;
  t.lambda = lambda;
  t.gamma = gamma;
  t.ell = ell;
  t.alpha = std::min(1.0, std::log(static_cast<double>(degree)) / ((2.0 + gamma) * degree));
  t.beta = std::min(1.0, 4.0 * lambda);
  t.bands_degenerate = t.beta <= t.alpha;
  return t;
}

ThresholdParams custom_thresholds(double alpha, double beta, double lambda) {
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0)) throw InvalidArgument("alpha and beta must lie in [0,1]");
  if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");
  ThresholdParams t;
  t.alpha = alpha;
  t.beta = beta;
  t.lambda = lambda;
  t.gamma = 0.0;
  t.bands_degenerate = beta <= alpha;
  return t;
}

int alpha_cut(double alpha, int n) { return std::clamp(static_cast<int>(std::floor(alpha * n + 1e-9)), 0, n); }
int beta_cut(double beta, int n) { return std::clamp(static_cast<int>(std::floor(beta * n + 1e-9)), 0, n); }

PartitionHatEstimate estimate_partition_hat(const BipartiteGraph& g, double lambda, const ThresholdParams& t,
                                            const CountingOptions& opt) {
  check_accuracy(opt);
  if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");
  const int nx = g.x_count(), ny = g.y_count();
  const int ax = alpha_cut(t.alpha, nx), ay = alpha_cut(t.alpha, ny);
  const int bx = beta_cut(t.beta, nx), by = beta_cut(t.beta, ny);

  struct Job {
    BandTerm term;
    int kx = 0, ky = 0;  // both_small
    int k = 0;           // bands
  };
  std::vector<Job> jobs;
  for (int kx = 0; kx <= ax; ++kx) {
    for (int ky = 0; ky <= ay; ++ky) {
      Job j;
      j.term.kind = "both_small";
      j.term.k_lo = j.term.k_hi = kx;
      j.term.k_y_lo = j.term.k_y_hi = ky;
      j.kx = kx;
      j.ky = ky;
      jobs.push_back(j);
    }
  }
  for (int k = ax + 1; k <= bx; ++k) {
    Job j;
    j.term.kind = "x_band";
    j.term.k_lo = j.term.k_hi = k;
    j.k = k;
    jobs.push_back(j);
  }
  for (int k = ay + 1; k <= by; ++k) {
    Job j;
    j.term.kind = "y_band";
    j.term.k_lo = j.term.k_hi = k;
    j.k = k;
    jobs.push_back(j);
  }

  PartitionHatEstimate out;
  out.epsilon = opt.epsilon;
  out.delta = opt.delta;
  out.thresholds = t;
  const double log_lambda = lambda > 0.0 ? std::log(lambda) : kNegInf;
  const auto T = static_cast<double>(jobs.size());
  const BipartiteGraph mirrored = g.mirrored();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    Job& j = jobs[i];
    CountingOptions inner = opt;
    // a sum of positive terms, each within relative eps, is within relative eps;
    // confidence is split by a union bound
    inner.delta = opt.delta / T;
    inner.seed = derive_seed(opt.seed, i);
    if (j.term.kind == "both_small") {
      if (j.kx + j.ky == 0) {
        j.term.value_log = 0.0;
      } else if (lambda == 0.0) {
        j.term.value_log = kNegInf;
      } else {
        try {
          CountEstimate e = estimate_two_sided_count(g, j.kx, j.ky, inner);
          j.term.value_log = e.log_estimate + (j.kx + j.ky) * log_lambda;
          j.term.samples = e.samples;
        } catch (const EmptyLink&) {
          j.term.value_log = kNegInf;
        }
      }
    } else {
      const BipartiteGraph& side = j.term.kind == "x_band" ? g : mirrored;
      CountEstimate e = estimate_one_sided_partition(side, j.k, lambda, inner);
      j.term.value_log = e.log_estimate;
      j.term.samples = e.samples;
    }
    out.log_estimate = i == 0 ? j.term.value_log : log_add(out.log_estimate, j.term.value_log);
    out.samples += j.term.samples;
    out.bands.push_back(j.term);
  }
  return out;
}

// ---- exact oracles ----------------------------------------------------------------

namespace {

struct PartitionMemo {
  std::vector<std::uint64_t> adj;
  long double lambda;
  std::unordered_map<std::uint64_t, long double> memo;

  long double component(std::uint64_t mask) {
    if (mask == 0) return 1.0L;
    if ((mask & (mask - 1)) == 0) return 1.0L + lambda;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    int best = -1, best_deg = -1;
    for (std::uint64_t m = mask; m; m &= m - 1) {
      const int v = __builtin_ctzll(m);
      const int deg = __builtin_popcountll(adj[static_cast<std::size_t>(v)] & mask);
      if (deg > best_deg) {
        best_deg = deg;
        best = v;
      }
    }
    long double r;
    if (best_deg == 0) {
      r = std::pow(1.0L + lambda, static_cast<long double>(__builtin_popcountll(mask)));
    } else {
      const std::uint64_t bit = std::uint64_t{1} << best;
      r = solve(mask & ~bit) + lambda * solve(mask & ~bit & ~adj[static_cast<std::size_t>(best)]);
    }
    memo.emplace(mask, r);
    return r;
  }

  long double solve(std::uint64_t mask) {
    long double r = 1.0L;
    std::uint64_t rest = mask;
    while (rest) {
      std::uint64_t comp = rest & (~rest + 1);
      std::uint64_t frontier = comp;
      while (frontier) {
        std::uint64_t grow = 0;
        for (std::uint64_t m = frontier; m; m &= m - 1) grow |= adj[static_cast<std::size_t>(__builtin_ctzll(m))];
        grow &= rest & ~comp;
        comp |= grow;
        frontier = grow;
      }
      r *= component(comp);
      rest &= ~comp;
    }
    return r;
  }
};

// Enumerates k-subsets of X, tracking how many chosen vertices cover each y.
template <typename F>
void for_each_x_subset(const BipartiteGraph& g, int k, std::uint64_t cap, F&& visit) {
  const int nx = g.x_count();
  long double combos = 1.0L;
  for (int i = 0; i < k; ++i) combos = combos * (nx - i) / (i + 1);
  if (combos > static_cast<long double>(cap)) throw CapExceeded("too many subsets to enumerate");
  std::vector<int> cover(static_cast<std::size_t>(g.y_count()), 0);
  int free = g.y_count();
  std::vector<int> chosen;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(chosen.size()) == k) {
      visit(chosen, free);
      return;
    }
    for (int x = start; x <= nx - (k - static_cast<int>(chosen.size())); ++x) {
      for (int y : g.neighbors(Side::X, x)) {
        if (cover[static_cast<std::size_t>(y)]++ == 0) --free;
      }
      chosen.push_back(x);
      self(self, x + 1);
      chosen.pop_back();
      for (int y : g.neighbors(Side::X, x)) {
        if (--cover[static_cast<std::size_t>(y)] == 0) ++free;
      }
    }
  };
  rec(rec, 0);
}

std::vector<std::vector<long double>> binomials(int n) {
  std::vector<std::vector<long double>> c(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    c[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 1.0L);
    for (int j = 1; j < i; ++j) {
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] + c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
  }
  return c;
}

}  // namespace

long double exact_partition(const Graph& g, double lambda, int cap) {
  const int n = g.vertex_count();
  if (n > cap || n > 64) throw CapExceeded("exact_partition: graph has " + std::to_string(n) + " vertices, cap is " + std::to_string(std::min(cap, 64)));
  if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");
  PartitionMemo pm;
  pm.lambda = lambda;
  pm.adj.assign(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    for (int u : g.neighbors(v)) pm.adj[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
  }
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return pm.solve(all);
}

long double exact_partition(const BipartiteGraph& g, double lambda, int cap) {
  return exact_partition(g.as_graph(), lambda, cap);
}

long double exact_slice_count(const BipartiteGraph& g, int k_x, int k_y, std::uint64_t cap) {
  if (k_x < 0 || k_y < 0) throw InvalidArgument("slice sizes must be nonnegative");
  if (k_x > g.x_count() || k_y > g.y_count()) return 0.0L;
  const auto c = binomials(g.y_count());
  long double total = 0.0L;
  for_each_x_subset(g, k_x, cap, [&](const std::vector<int>&, int free) {
    if (free >= k_y) total += c[static_cast<std::size_t>(free)][static_cast<std::size_t>(k_y)];
  });
  return total;
}

long double exact_one_sided_partition(const BipartiteGraph& g, int k, double lambda, std::uint64_t cap) {
  if (k < 0 || k > g.x_count()) throw InvalidArgument("k must lie in [0, |X|]");
  if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");
  const long double lk = std::pow(static_cast<long double>(lambda), static_cast<long double>(k));
  long double total = 0.0L;
  for_each_x_subset(g, k, cap, [&](const std::vector<int>&, int free) {
    total += std::pow(1.0L + lambda, static_cast<long double>(free));
  });
  return lk * total;
}

std::vector<std::vector<long double>> size_profile(const BipartiteGraph& g, int max_x) {
  const int nx = g.x_count(), ny = g.y_count();
  if (nx > max_x) {
    if (ny <= max_x) {
      auto t = size_profile(g.mirrored(), max_x);
      std::vector<std::vector<long double>> out(static_cast<std::size_t>(nx + 1), std::vector<long double>(static_cast<std::size_t>(ny + 1), 0.0L));
      for (int a = 0; a <= ny; ++a) {
        for (int b = 0; b <= nx; ++b) out[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
      return out;
    }
    throw CapExceeded("size_profile: both sides exceed the enumeration cap");
  }
  const auto c = binomials(ny);
  std::vector<std::vector<long double>> out(static_cast<std::size_t>(nx + 1), std::vector<long double>(static_cast<std::size_t>(ny + 1), 0.0L));
  for (int k = 0; k <= nx; ++k) {
    for_each_x_subset(g, k, std::numeric_limits<std::uint64_t>::max(), [&](const std::vector<int>&, int free) {
      for (int b = 0; b <= free; ++b) out[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)] += c[static_cast<std::size_t>(free)][static_cast<std::size_t>(b)];
    });
  }
  return out;
}

HatDecomposition exact_partition_hat(const BipartiteGraph& g, double lambda, const ThresholdParams& t) {
  const int nx = g.x_count(), ny = g.y_count();
  const auto prof = size_profile(g);
  const int ax = alpha_cut(t.alpha, nx), ay = alpha_cut(t.alpha, ny);
  const int bx = beta_cut(t.beta, nx), by = beta_cut(t.beta, ny);
  HatDecomposition h;
  for (int a = 0; a <= nx; ++a) {
    for (int b = 0; b <= ny; ++b) {
      const long double w = prof[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                            std::pow(static_cast<long double>(lambda), static_cast<long double>(a + b));
      h.z += w;
      const bool small = a <= ax && b <= ay;
      const bool xb = a > ax && a <= bx;
      const bool yb = b > ay && b <= by;
      const int times = static_cast<int>(small) + static_cast<int>(xb) + static_cast<int>(yb);
      h.z_hat += times * w;
      if (times == 0) h.dropped += w;
      if (times == 2) h.double_counted += w;
    }
  }
  return h;
}

}  // namespace slicewalk
