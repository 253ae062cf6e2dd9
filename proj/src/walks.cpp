#include "slicewalk/walks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "slicewalk/error.hpp"

namespace slicewalk {

// ---- ChainState --------------------------------------------------------------

ChainState::ChainState(SlicePtr slice, const Facet& initial) : slice_(std::move(slice)) {
  if (!slice_->is_facet(initial)) throw InvalidArgument("initial state is not a facet of the slice");
  in_.assign(static_cast<std::size_t>(slice_->ground_size()), 0);
  const Facet& tau = slice_->pinned();
  members_ = tau;
  pinned_count_ = tau.size();
  for (int e : initial) {
    if (!std::binary_search(tau.begin(), tau.end(), e)) members_.push_back(e);
    in_[static_cast<std::size_t>(e)] = 1;
  }
}

Facet ChainState::facet() const {
  Facet f = members_;
  std::sort(f.begin(), f.end());
  return f;
}

void ChainState::remove_at(std::size_t free_pos) {
  const std::size_t i = pinned_count_ + free_pos;
  in_[static_cast<std::size_t>(members_[i])] = 0;
  members_[i] = members_.back();
  members_.pop_back();
}

void ChainState::insert(int e) {
  members_.push_back(e);
  in_[static_cast<std::size_t>(e)] = 1;
}

namespace {

constexpr int kRejectionTries = 64;

class TwoSidedState final : public ChainState {
 public:
  TwoSidedState(std::shared_ptr<const TwoSidedSlice> s, const Facet& initial)
      : ChainState(s, initial), s_(std::move(s)), g_(s_->graph()) {
    cov_x_.assign(static_cast<std::size_t>(g_.x_count()), 0);
    cov_y_.assign(static_cast<std::size_t>(g_.y_count()), 0);
    for (int e : members_) touch(e, +1);
  }

  void step(Rng& rng) override {
    ++steps_;
    const std::size_t nfree = members_.size() - pinned_count_;
    if (nfree == 0) return;
    const auto pos = static_cast<std::size_t>(rng.uniform_index(nfree));
    const int e = members_[pinned_count_ + pos];
    remove_at(pos);
    touch(e, -1);
    const Side side = s_->is_x(e) ? Side::X : Side::Y;
    const int w = pick(side, rng);
    const int ne = s_->element(side, w);
    insert(ne);
    touch(ne, +1);
  }

  bool counters_consistent() const override {
    std::vector<int> cx(cov_x_.size(), 0);
    std::vector<int> cy(cov_y_.size(), 0);
    for (int e : members_) {
      const VertexRef v = s_->vertex(e);
      auto& c = v.side == Side::X ? cy : cx;
      for (int w : g_.neighbors(v.side, v.index)) ++c[static_cast<std::size_t>(w)];
    }
    return cx == cov_x_ && cy == cov_y_;
  }

 private:
  void touch(int e, int delta) {
    const VertexRef v = s_->vertex(e);
    auto& c = v.side == Side::X ? cov_y_ : cov_x_;
    for (int w : g_.neighbors(v.side, v.index)) c[static_cast<std::size_t>(w)] += delta;
  }

  bool valid(Side side, int w) const {
    const auto& c = side == Side::X ? cov_x_ : cov_y_;
    return c[static_cast<std::size_t>(w)] == 0 && !in_[static_cast<std::size_t>(s_->element(side, w))];
  }

  int pick(Side side, Rng& rng) {
    const int n = g_.side_count(side);
    for (int t = 0; t < kRejectionTries; ++t) {
      const int w = rng.uniform_int(n);
      if (valid(side, w)) return w;
    }
    cand_.clear();
    for (int w = 0; w < n; ++w) {
      if (valid(side, w)) cand_.push_back(w);
    }
    return cand_[static_cast<std::size_t>(rng.uniform_index(cand_.size()))];
  }

  std::shared_ptr<const TwoSidedSlice> s_;
  const BipartiteGraph& g_;
  std::vector<int> cov_x_;  // facet Y-vertices adjacent to x
  std::vector<int> cov_y_;  // facet X-vertices adjacent to y
  std::vector<int> cand_;
};

class OneSidedState final : public ChainState {
 public:
  OneSidedState(std::shared_ptr<const OneSidedSlice> s, const Facet& initial)
      : ChainState(s, initial), s_(std::move(s)), g_(s_->graph()) {
    cov_.assign(static_cast<std::size_t>(g_.y_count()), 0);
    for (int x : members_) {
      for (int y : g_.neighbors(Side::X, x)) ++cov_[static_cast<std::size_t>(y)];
    }
    uncovered_.assign(static_cast<std::size_t>(g_.x_count()), 0);
    int maxdeg = 0;
    for (int x = 0; x < g_.x_count(); ++x) {
      maxdeg = std::max(maxdeg, g_.degree(Side::X, x));
      for (int y : g_.neighbors(Side::X, x)) {
        if (cov_[static_cast<std::size_t>(y)] == 0) ++uncovered_[static_cast<std::size_t>(x)];
      }
    }
    const double q = 1.0 + s_->lambda();
    for (int j = 0; j <= maxdeg; ++j) pow_.push_back(std::pow(q, -j));
    weights_.resize(static_cast<std::size_t>(g_.x_count()));
  }

  void step(Rng& rng) override {
    ++steps_;
    const std::size_t nfree = members_.size() - pinned_count_;
    if (nfree == 0) return;
    const auto pos = static_cast<std::size_t>(rng.uniform_index(nfree));
    const int x = members_[pinned_count_ + pos];
    remove_at(pos);
    for (int y : g_.neighbors(Side::X, x)) {
      if (--cov_[static_cast<std::size_t>(y)] == 0) {
        for (int z : g_.neighbors(Side::Y, y)) ++uncovered_[static_cast<std::size_t>(z)];
      }
    }
    // weight of S' + x' is proportional to (1+lambda)^{-#neighbors of x' left uncovered by S'}
    double total = 0.0;
    for (int z = 0; z < g_.x_count(); ++z) {
      const double w = in_[static_cast<std::size_t>(z)] ? 0.0 : pow_[static_cast<std::size_t>(uncovered_[static_cast<std::size_t>(z)])];
      weights_[static_cast<std::size_t>(z)] = w;
      total += w;
    }
    const int nx = static_cast<int>(rng.categorical(weights_, total));
    insert(nx);
    for (int y : g_.neighbors(Side::X, nx)) {
      if (cov_[static_cast<std::size_t>(y)]++ == 0) {
        for (int z : g_.neighbors(Side::Y, y)) --uncovered_[static_cast<std::size_t>(z)];
      }
    }
  }

  bool counters_consistent() const override {
    std::vector<int> c(cov_.size(), 0);
    for (int x : members_) {
      for (int y : g_.neighbors(Side::X, x)) ++c[static_cast<std::size_t>(y)];
    }
    if (c != cov_) return false;
    for (int x = 0; x < g_.x_count(); ++x) {
      int u = 0;
      for (int y : g_.neighbors(Side::X, x)) u += c[static_cast<std::size_t>(y)] == 0;
      if (u != uncovered_[static_cast<std::size_t>(x)]) return false;
    }
    return true;
  }

 private:
  std::shared_ptr<const OneSidedSlice> s_;
  const BipartiteGraph& g_;
  std::vector<int> cov_;        // facet members adjacent to y
  std::vector<int> uncovered_;  // neighbors of x with cov == 0
  std::vector<double> pow_;
  std::vector<double> weights_;
};

class RegularState final : public ChainState {
 public:
  RegularState(std::shared_ptr<const RegularSlice> s, const Facet& initial)
      : ChainState(s, initial), s_(std::move(s)), g_(s_->graph()) {
    cov_.assign(static_cast<std::size_t>(g_.vertex_count()), 0);
    for (int v : members_) touch(v, +1);
  }

  void step(Rng& rng) override {
    ++steps_;
    const std::size_t nfree = members_.size() - pinned_count_;
    if (nfree == 0) return;
    const auto pos = static_cast<std::size_t>(rng.uniform_index(nfree));
    const int v = members_[pinned_count_ + pos];
    remove_at(pos);
    touch(v, -1);
    const int w = pick(rng);
    insert(w);
    touch(w, +1);
  }

  bool counters_consistent() const override {
    std::vector<int> c(cov_.size(), 0);
    for (int v : members_) {
      for (int w : g_.neighbors(v)) ++c[static_cast<std::size_t>(w)];
    }
    return c == cov_;
  }

 private:
  void touch(int v, int delta) {
    for (int w : g_.neighbors(v)) cov_[static_cast<std::size_t>(w)] += delta;
  }
  bool valid(int w) const { return cov_[static_cast<std::size_t>(w)] == 0 && !in_[static_cast<std::size_t>(w)]; }
  int pick(Rng& rng) {
    const int n = g_.vertex_count();
    for (int t = 0; t < kRejectionTries; ++t) {
      const int w = rng.uniform_int(n);
      if (valid(w)) return w;
    }
    cand_.clear();
    for (int w = 0; w < n; ++w) {
      if (valid(w)) cand_.push_back(w);
    }
    return cand_[static_cast<std::size_t>(rng.uniform_index(cand_.size()))];
  }

  std::shared_ptr<const RegularSlice> s_;
  const Graph& g_;
  std::vector<int> cov_;
  std::vector<int> cand_;
};

}  // namespace

std::unique_ptr<ChainState> make_chain(SlicePtr slice, const Facet& initial) {
  switch (slice->kind()) {
    case SliceKind::two_sided:
      return std::make_unique<TwoSidedState>(std::dynamic_pointer_cast<const TwoSidedSlice>(slice), initial);
    case SliceKind::one_sided:
      return std::make_unique<OneSidedState>(std::dynamic_pointer_cast<const OneSidedSlice>(slice), initial);
    case SliceKind::regular:
      return std::make_unique<RegularState>(std::dynamic_pointer_cast<const RegularSlice>(slice), initial);
  }
  throw InvalidArgument("unknown slice kind");
}

Facet greedy_initial_state(const Slice& slice, Rng& rng, int budget) {
  const Facet& tau = slice.pinned();
  std::vector<int> free;
  for (int e = 0; e < slice.ground_size(); ++e) {
    if (!std::binary_search(tau.begin(), tau.end(), e)) free.push_back(e);
  }
  const int need = slice.free_size();
  if (need > static_cast<int>(free.size())) throw EmptyLink("slice needs more elements than the ground set has");
  if (slice.kind() == SliceKind::one_sided) {
    // partial Fisher-Yates: first `need` entries are a uniform subset
    for (int i = 0; i < need; ++i) {
      const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.uniform_index(free.size() - static_cast<std::size_t>(i)));
      std::swap(free[static_cast<std::size_t>(i)], free[j]);
    }
    Facet f = tau;
    f.insert(f.end(), free.begin(), free.begin() + need);
    std::sort(f.begin(), f.end());
    return f;
  }
  for (int attempt = 0; attempt < budget; ++attempt) {
    rng.shuffle(free);
    std::vector<int> cur = tau;
    for (int e : free) {
      if (static_cast<int>(cur.size()) == slice.facet_size()) break;
      if (slice.can_add(cur, e)) cur.push_back(e);
    }
    if (static_cast<int>(cur.size()) == slice.facet_size()) {
      std::sort(cur.begin(), cur.end());
      return cur;
    }
  }
  throw BudgetExhausted("greedy construction found no facet in " + std::to_string(budget) + " restarts");
}

Eigen::MatrixXd exact_transition_matrix(const Slice& slice, bool lazy, std::size_t cap) {
  const std::vector<Facet> facets = enumerate_facets(slice, cap);
  const auto n = static_cast<Eigen::Index>(facets.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  const Facet& tau = slice.pinned();
  const int nfree = slice.free_size();
  std::vector<int> cand;
  std::vector<double> lw;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Facet& f = facets[static_cast<std::size_t>(i)];
    if (nfree == 0) {
      p(i, i) = 1.0;
      continue;
    }
    for (int v : f) {
      if (std::binary_search(tau.begin(), tau.end(), v)) continue;
      std::vector<int> rest;
      for (int e : f) {
        if (e != v) rest.push_back(e);
      }
      cand.clear();
      lw.clear();
      double top = -std::numeric_limits<double>::infinity();
      for (int e = 0; e < slice.ground_size(); ++e) {
        if (std::binary_search(rest.begin(), rest.end(), e) || !slice.can_add(rest, e)) continue;
        Facet g = rest;
        g.insert(std::upper_bound(g.begin(), g.end(), e), e);
        cand.push_back(e);
        lw.push_back(slice.log_weight(g));
        top = std::max(top, lw.back());
      }
      double total = 0.0;
      for (double& x : lw) {
        x = std::exp(x - top);
        total += x;
      }
      for (std::size_t c = 0; c < cand.size(); ++c) {
        Facet g = rest;
        g.insert(std::upper_bound(g.begin(), g.end(), cand[c]), cand[c]);
        const auto j = static_cast<Eigen::Index>(std::lower_bound(facets.begin(), facets.end(), g) - facets.begin());
        p(i, j) += lw[c] / total / nfree;
      }
    }
  }
  if (lazy) p = 0.5 * (Eigen::MatrixXd::Identity(n, n) + p);
  return p;
}

double detailed_balance_defect(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
  double worst = 0.0;
  for (Eigen::Index a = 0; a < p.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < p.cols(); ++b) {
      worst = std::max(worst, std::abs(pi(a) * p(a, b) - pi(b) * p(b, a)));
    }
  }
  return worst;
}

GapInfo spectral_gap(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
  if (p.rows() != p.cols() || p.rows() != pi.size()) throw InvalidArgument("spectral_gap: shape mismatch");
  const double defect = detailed_balance_defect(p, pi);
  if (defect > 1e-10) throw InvalidArgument("chain is not reversible (defect " + std::to_string(defect) + ")");
  GapInfo g;
  const Eigen::Index n = p.rows();
  if (n <= 1) {
    g.lambda2 = 0.0;
    g.lambda_star = 0.0;
    g.gap = 1.0;
    return g;
  }
  const Eigen::VectorXd s = pi.cwiseSqrt();
  Eigen::MatrixXd m = s.asDiagonal() * p * s.cwiseInverse().asDiagonal();
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NotConverged("chain eigensolve failed");
  const auto& ev = es.eigenvalues();
  g.lambda2 = ev(n - 2);
  g.lambda_star = std::max(std::abs(ev(n - 2)), std::abs(ev(0)));
  g.gap = 1.0 - g.lambda2;
  return g;
}

int communicating_classes(const Eigen::MatrixXd& p) {
  const auto n = static_cast<int>(p.rows());
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int classes = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = classes;
    stack.assign(1, s);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if ((p(u, v) > 0.0 || p(v, u) > 0.0) && comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = classes;
          stack.push_back(v);
        }
      }
    }
    ++classes;
  }
  return classes;
}

double tv_distance(const std::vector<double>& empirical, const std::vector<double>& exact) {
  if (empirical.size() != exact.size()) throw InvalidArgument("tv_distance: support sizes differ");
  const double total = std::accumulate(empirical.begin(), empirical.end(), 0.0);
  if (total <= 0.0) throw InvalidArgument("tv_distance: empty histogram");
  double s = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) s += std::abs(empirical[i] / total - exact[i]);
  return std::min(1.0, 0.5 * s);
}

double integrated_autocorrelation_time(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 16) return 1.0;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double x : series) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n - 1);
  if (var <= 0.0) return 1.0;
  const auto b = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  const std::size_t a = n / b;
  double bvar = 0.0;
  for (std::size_t i = 0; i < a; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < b; ++j) m += series[i * b + j];
    m /= static_cast<double>(b);
    bvar += (m - mean) * (m - mean);
  }
  bvar /= static_cast<double>(a - 1);
  return std::max(static_cast<double>(b) * bvar / var, 1e-3);
}

RunResult run_chain(SlicePtr slice, const ChainConfig& config, const RunOptions& opt, std::optional<Facet> initial) {
  RunResult res;
  Rng rng(derive_seed(config.seed, 0));
  if (initial) {
    res.initial = *initial;
  } else {
    Rng init_rng(derive_seed(config.seed, 1));
    res.initial = greedy_initial_state(*slice, init_rng);
  }
  auto chain = make_chain(slice, res.initial);
  const std::uint64_t burn = config.burn_in.value_or(config.steps / 2);
  const std::uint64_t thin =
      std::max<std::uint64_t>(1, config.thinning.value_or(static_cast<std::uint64_t>(std::max(1, slice->facet_size()))));

  std::optional<FacetDistribution> oracle;
  try {
    oracle = exact_distribution(*slice, opt.oracle_cap);
  } catch (const CapExceeded&) {
  }
  std::vector<double> hist(oracle ? oracle->facets.size() : 0, 0.0);
  std::vector<double> obs;
  std::set<Facet> seen;

  auto emit = [&](const Facet& f) {
    ++res.report.samples;
    if (opt.keep_samples) res.samples.push_back(f);
    if (opt.on_sample) opt.on_sample(f);
    if (oracle) hist[oracle->index_of(f)] += 1.0;
    obs.push_back(static_cast<double>(std::accumulate(f.begin(), f.end(), 0LL)));
    if (seen.size() < 100000) seen.insert(f);
  };

  if (config.steps == 0) {
    emit(res.initial);
  }
  for (std::uint64_t t = 1; t <= config.steps; ++t) {
    if (config.lazy) {
      chain->lazy_step(rng);
    } else {
      chain->step(rng);
    }
    if (t > burn && (t - burn) % thin == 0) emit(chain->facet());
  }
  res.report.steps = config.steps;
  res.report.distinct = seen.size();
  if (!obs.empty()) {
    res.report.mean_observable = std::accumulate(obs.begin(), obs.end(), 0.0) / static_cast<double>(obs.size());
    res.report.autocorrelation_time = integrated_autocorrelation_time(obs);
  }
  if (oracle && res.report.samples > 0) {
    res.report.tv = tv_distance(hist, oracle->prob);
    const Eigen::MatrixXd p = exact_transition_matrix(*slice, config.lazy, opt.oracle_cap);
    const Eigen::VectorXd pi = Eigen::Map<const Eigen::VectorXd>(oracle->prob.data(), static_cast<Eigen::Index>(oracle->prob.size()));
    res.report.gap = spectral_gap(p, pi);
  }
  return res;
}

}  // namespace slicewalk
