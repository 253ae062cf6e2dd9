#include "slicewalk/slices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "slicewalk/error.hpp"

namespace slicewalk {

std::string to_string(SliceKind k) {
  switch (k) {
    case SliceKind::two_sided: return "two_sided";
    case SliceKind::one_sided: return "one_sided";
    case SliceKind::regular: return "regular";
  }
  return "?";
}

// ---- Slice -------------------------------------------------------------------

void Slice::set_pinned(Facet tau) {
  std::sort(tau.begin(), tau.end());
  if (std::adjacent_find(tau.begin(), tau.end()) != tau.end()) throw InvalidArgument("pinned face has repeats");
  for (int e : tau) {
    if (e < 0 || e >= ground_size()) throw InvalidArgument("pinned element out of range");
  }
  if (static_cast<int>(tau.size()) > facet_size()) throw InvalidArgument("pinned face larger than a facet");
  std::vector<int> partial;
  for (int e : tau) {
    if (!can_add(partial, e)) throw InvalidArgument("pinned face is not a face of this slice");
    partial.push_back(e);
  }
  pinned_ = std::move(tau);
}

bool Slice::is_facet(const Facet& f) const {
  if (static_cast<int>(f.size()) != facet_size()) return false;
  if (!std::includes(f.begin(), f.end(), pinned_.begin(), pinned_.end())) return false;
  std::vector<int> partial;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0 || f[i] >= ground_size()) return false;
    if (i > 0 && f[i - 1] >= f[i]) return false;
    if (!can_add(partial, f[i])) return false;
    partial.push_back(f[i]);
  }
  return true;
}

std::string Slice::format_facet(const Facet& f) const {
  std::string out;
  for (int e : f) {
    if (!out.empty()) out += ' ';
    out += element_label(e);
  }
  return out;
}

// ---- TwoSidedSlice -----------------------------------------------------------

TwoSidedSlice::TwoSidedSlice(std::shared_ptr<const BipartiteGraph> g, int k_x, int k_y, Facet tau)
    : g_(std::move(g)), kx_(k_x), ky_(k_y) {
  if (!g_) throw InvalidArgument("null graph");
  if (k_x < 0 || k_y < 0) throw InvalidArgument("slice sizes must be nonnegative");
  set_pinned(std::move(tau));
}

bool TwoSidedSlice::can_add(const std::vector<int>& partial, int e) const {
  const bool ex = is_x(e);
  int same = 0;
  const VertexRef v = vertex(e);
  for (int p : partial) {
    if (p == e) return false;
    if (is_x(p) == ex) {
      ++same;
    } else {
      const VertexRef w = vertex(p);
      const bool adj = ex ? g_->has_edge(v.index, w.index) : g_->has_edge(w.index, v.index);
      if (adj) return false;
    }
  }
  return same < (ex ? kx_ : ky_);
}

SlicePtr TwoSidedSlice::with_pinned(Facet tau) const {
  return std::make_shared<TwoSidedSlice>(g_, kx_, ky_, std::move(tau));
}

std::string TwoSidedSlice::element_label(int e) const {
  const VertexRef v = vertex(e);
  return (v.side == Side::X ? "x" : "y") + std::to_string(v.index);
}

std::string TwoSidedSlice::format_facet(const Facet& f) const {
  std::string xs;
  std::string ys;
  for (int e : f) {
    std::string& t = is_x(e) ? xs : ys;
    if (!t.empty()) t += ' ';
    t += element_label(e);
  }
  std::string out = xs;
  out += xs.empty() ? "|" : " |";
  if (!ys.empty()) out += " " + ys;
  return out;
}

BiVertexSet TwoSidedSlice::split(const Facet& f) const {
  BiVertexSet s;
  for (int e : f) {
    if (is_x(e)) {
      s.x.push_back(e);
    } else {
      s.y.push_back(e - g_->x_count());
    }
  }
  return s;
}

Facet TwoSidedSlice::join(const BiVertexSet& s) const {
  Facet f = s.x;
  for (int y : s.y) f.push_back(g_->x_count() + y);
  return f;
}

// ---- OneSidedSlice -----------------------------------------------------------

OneSidedSlice::OneSidedSlice(std::shared_ptr<const BipartiteGraph> g, int k, double lambda, Facet tau)
    : g_(std::move(g)), k_(k), lambda_(lambda) {
  if (!g_) throw InvalidArgument("null graph");
  if (k < 0) throw InvalidArgument("slice size must be nonnegative");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("fugacity must be finite and >= 0");
  set_pinned(std::move(tau));
}

bool OneSidedSlice::can_add(const std::vector<int>& partial, int e) const {
  if (static_cast<int>(partial.size()) >= k_) return false;
  return std::find(partial.begin(), partial.end(), e) == partial.end();
}

int OneSidedSlice::free_count(const std::vector<int>& s) const {
  std::vector<char> covered(static_cast<std::size_t>(g_->y_count()), 0);
  int n = g_->y_count();
  for (int x : s) {
    for (int y : g_->neighbors(Side::X, x)) {
      if (!covered[static_cast<std::size_t>(y)]) {
        covered[static_cast<std::size_t>(y)] = 1;
        --n;
      }
    }
  }
  return n;
}

double OneSidedSlice::log_weight(const Facet& s) const { return free_count(s) * std::log1p(lambda_); }

SlicePtr OneSidedSlice::with_pinned(Facet tau) const {
  return std::make_shared<OneSidedSlice>(g_, k_, lambda_, std::move(tau));
}

std::string OneSidedSlice::element_label(int e) const { return "x" + std::to_string(e); }

double one_sided_log_weight(const BipartiteGraph& g, const VertexSet& s, double lambda) {
  const int free = g.y_count() - static_cast<int>(open_neighborhood(g, Side::X, s).size());
  const double size_term = s.empty() ? 0.0 : static_cast<double>(s.size()) * std::log(lambda);
  return size_term + free * std::log1p(lambda);
}

double one_sided_weight(const OneSidedSlice& slice, const VertexSet& s) {
  if (static_cast<int>(s.size()) != slice.k()) {
    throw InvalidArgument("one_sided_weight needs |S| = k = " + std::to_string(slice.k()));
  }
  return std::exp(one_sided_log_weight(slice.graph(), make_vertex_set(s), slice.lambda()));
}

// ---- RegularSlice ------------------------------------------------------------

RegularSlice::RegularSlice(std::shared_ptr<const Graph> g, int k, Facet tau) : g_(std::move(g)), k_(k) {
  if (!g_) throw InvalidArgument("null graph");
  if (k < 0) throw InvalidArgument("slice size must be nonnegative");
  set_pinned(std::move(tau));
}

bool RegularSlice::can_add(const std::vector<int>& partial, int e) const {
  if (static_cast<int>(partial.size()) >= k_) return false;
  for (int p : partial) {
    if (p == e || g_->has_edge(p, e)) return false;
  }
  return true;
}

SlicePtr RegularSlice::with_pinned(Facet tau) const { return std::make_shared<RegularSlice>(g_, k_, std::move(tau)); }

std::string RegularSlice::element_label(int e) const { return "v" + std::to_string(e); }

// ---- enumeration -------------------------------------------------------------

namespace {

struct Enumerator {
  const Slice& slice;
  std::vector<int> free;
  std::vector<int> current;
  std::size_t cap;
  bool stop_at_first = false;
  std::vector<Facet>* out = nullptr;
  std::size_t found = 0;

  explicit Enumerator(const Slice& s, std::size_t c) : slice(s), cap(c) {
    const Facet& tau = s.pinned();
    for (int e = 0; e < s.ground_size(); ++e) {
      if (!std::binary_search(tau.begin(), tau.end(), e)) free.push_back(e);
    }
    current = tau;
  }

  // returns true to stop
  bool run(std::size_t from, int need) {
    if (need == 0) {
      ++found;
      if (out) {
        if (out->size() >= cap) {
          throw CapExceeded("slice has more than " + std::to_string(cap) + " facets");
        }
        Facet f = current;
        std::sort(f.begin(), f.end());
        out->push_back(std::move(f));
      }
      return stop_at_first;
    }
    for (std::size_t i = from; i + static_cast<std::size_t>(need) <= free.size(); ++i) {
      const int e = free[i];
      if (!slice.can_add(current, e)) continue;
      current.push_back(e);
      const bool stop = run(i + 1, need - 1);
      current.pop_back();
      if (stop) return true;
    }
    return false;
  }
};

}  // namespace

std::vector<Facet> enumerate_facets(const Slice& slice, std::size_t cap) {
  std::vector<Facet> out;
  if (slice.free_size() < 0) return out;
  Enumerator en(slice, cap);
  en.out = &out;
  en.run(0, slice.free_size());
  std::sort(out.begin(), out.end());
  return out;
}

bool has_facet(const Slice& slice) {
  Enumerator en(slice, 0);
  en.stop_at_first = true;
  return en.run(0, slice.free_size());
}

std::size_t FacetDistribution::index_of(const Facet& f) const {
  auto it = std::lower_bound(facets.begin(), facets.end(), f);
  if (it == facets.end() || *it != f) throw InvalidArgument("facet not in distribution");
  return static_cast<std::size_t>(it - facets.begin());
}

FacetDistribution exact_distribution(const Slice& slice, std::size_t cap) {
  FacetDistribution d;
  d.facets = enumerate_facets(slice, cap);
  if (d.facets.empty()) throw EmptyLink("slice has no facets");
  std::vector<double> lw(d.facets.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.facets.size(); ++i) {
    lw[i] = slice.log_weight(d.facets[i]);
    top = std::max(top, lw[i]);
  }
  d.prob.resize(lw.size());
  double total = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    d.prob[i] = std::exp(lw[i] - top);
    total += d.prob[i];
  }
  for (double& p : d.prob) p /= total;
  return d;
}

SlicePtr link(const Slice& slice, const Facet& face, bool check) {
  Facet tau = slice.pinned();
  for (int e : face) {
    if (!std::binary_search(slice.pinned().begin(), slice.pinned().end(), e)) tau.push_back(e);
  }
  SlicePtr out;
  try {
    out = slice.with_pinned(std::move(tau));
  } catch (const InvalidArgument& ex) {
    throw EmptyLink(std::string("face cannot be pinned: ") + ex.what());
  }
  if (check && !has_facet(*out)) throw EmptyLink("face does not extend to a facet");
  return out;
}

// ---- LinkOperator ------------------------------------------------------------

int LinkOperator::index_of(int element) const {
  auto it = std::lower_bound(ground.begin(), ground.end(), element);
  if (it == ground.end() || *it != element) return -1;
  return static_cast<int>(it - ground.begin());
}

Eigen::VectorXd LinkOperator::spectrum() const {
  const Eigen::VectorXd s = pi.cwiseSqrt();
  const Eigen::VectorXd is = s.cwiseInverse();
  Eigen::MatrixXd m = s.asDiagonal() * P * is.asDiagonal();
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NotConverged("link eigensolve failed");
  return es.eigenvalues().reverse();
}

double LinkOperator::lambda2() const {
  const Eigen::VectorXd ev = spectrum();
  return ev.size() >= 2 ? ev(1) : ev(0);
}

LinkDefects check_link_operator(const LinkOperator& op) {
  LinkDefects d;
  const int n = op.size();
  d.min_pi = n > 0 ? op.pi.minCoeff() : 0.0;
  d.pi_sum = std::abs(op.pi.sum() - 1.0);
  for (int u = 0; u < n; ++u) {
    d.row_sum = std::max(d.row_sum, std::abs(op.P.row(u).sum() - 1.0));
    for (int v = 0; v < n; ++v) {
      d.detailed_balance = std::max(d.detailed_balance, std::abs(op.pi(u) * op.P(u, v) - op.pi(v) * op.P(v, u)));
    }
  }
  d.stationarity = n > 0 ? (op.P.transpose() * op.pi - op.pi).lpNorm<1>() : 0.0;
  return d;
}

namespace {

void require_codim_two(const Slice& slice) {
  if (slice.free_size() != 2) {
    throw InvalidArgument("local walk needs a face of codimension 2 (pinned " + std::to_string(slice.pinned().size()) +
                          ", facet size " + std::to_string(slice.facet_size()) + ")");
  }
}

// Random walk on a 0/1 symmetric adjacency over `cand`; isolated candidates are dropped.
LinkOperator walk_on_adjacency(const std::vector<int>& cand, const Eigen::MatrixXd& adj) {
  LinkOperator op;
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(cand.size()); ++i) {
    if (adj.row(i).sum() > 0.0) {
      keep.push_back(i);
      op.ground.push_back(cand[static_cast<std::size_t>(i)]);
    } else {
      op.dropped.push_back(cand[static_cast<std::size_t>(i)]);
    }
  }
  if (keep.size() < 2) throw EmptyLink("link has no edges");
  const int m = static_cast<int>(keep.size());
  op.P.resize(m, m);
  op.pi.resize(m);
  op.Z_u.resize(static_cast<std::size_t>(m));
  double total = 0.0;
  for (int a = 0; a < m; ++a) {
    double deg = 0.0;
    for (int b = 0; b < m; ++b) {
      op.P(a, b) = adj(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
      deg += op.P(a, b);
    }
    op.Z_u[static_cast<std::size_t>(a)] = deg;
    op.P.row(a) /= deg;
    op.pi(a) = deg;
    total += deg;
  }
  op.pi /= total;
  op.Z_tau = total / 2.0;  // edge count
  return op;
}

}  // namespace

LinkOperator local_walk_exact(const Slice& slice, std::size_t cap) {
  require_codim_two(slice);
  const std::vector<Facet> facets = enumerate_facets(slice, cap);
  const Facet& tau = slice.pinned();
  std::map<int, int> pos;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> lw;
  double top = -std::numeric_limits<double>::infinity();
  for (const Facet& f : facets) {
    std::vector<int> fr;
    std::set_difference(f.begin(), f.end(), tau.begin(), tau.end(), std::back_inserter(fr));
    pairs.emplace_back(fr[0], fr[1]);
    pos.emplace(fr[0], 0);
    pos.emplace(fr[1], 0);
    lw.push_back(slice.log_weight(f));
    top = std::max(top, lw.back());
  }
  LinkOperator op;
  for (auto& [e, i] : pos) {
    i = static_cast<int>(op.ground.size());
    op.ground.push_back(e);
  }
  for (int e = 0; e < slice.ground_size(); ++e) {
    if (!pos.count(e) && !std::binary_search(tau.begin(), tau.end(), e) && slice.can_add(tau, e)) {
      op.dropped.push_back(e);
    }
  }
  const int m = op.size();
  if (m < 2) throw EmptyLink("link has no edges");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  double total = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double x = std::exp(lw[i] - top);
    const int a = pos[pairs[i].first];
    const int b = pos[pairs[i].second];
    w(a, b) += x;
    w(b, a) += x;
    total += x;
  }
  op.P.resize(m, m);
  op.pi.resize(m);
  op.Z_u.resize(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    const double row = w.row(a).sum();
    op.Z_u[static_cast<std::size_t>(a)] = row;
    op.P.row(a) = w.row(a) / row;
    op.pi(a) = row / (2.0 * total);
  }
  op.Z_tau = total;
  return op;
}

BiVertexSet two_sided_survivors(const TwoSidedSlice& slice) {
  const BipartiteGraph& g = slice.graph();
  const BiVertexSet tau = slice.split(slice.pinned());
  BiVertexSet s;
  const VertexSet nx = open_neighborhood(g, Side::Y, tau.y);
  const VertexSet ny = open_neighborhood(g, Side::X, tau.x);
  for (int x = 0; x < g.x_count(); ++x) {
    if (!contains(tau.x, x) && !contains(nx, x)) s.x.push_back(x);
  }
  for (int y = 0; y < g.y_count(); ++y) {
    if (!contains(tau.y, y) && !contains(ny, y)) s.y.push_back(y);
  }
  return s;
}

LinkOperator two_sided_link_walk_closed_form(const TwoSidedSlice& slice) {
  require_codim_two(slice);
  const BiVertexSet tau = slice.split(slice.pinned());
  const int fx = slice.k_x() - static_cast<int>(tau.x.size());
  const BiVertexSet surv = two_sided_survivors(slice);
  std::vector<int> cand;
  Eigen::MatrixXd adj;
  if (fx == 1) {
    const BipartiteGraph gt = bipartite_complement(induced_subgraph(slice.graph(), surv).graph);
    for (int x : surv.x) cand.push_back(slice.element(Side::X, x));
    for (int y : surv.y) cand.push_back(slice.element(Side::Y, y));
    const Graph flat = gt.as_graph();
    const auto m = static_cast<Eigen::Index>(cand.size());
    adj = Eigen::MatrixXd::Zero(m, m);
    for (const auto& [u, v] : flat.edges()) {
      adj(u, v) = 1.0;
      adj(v, u) = 1.0;
    }
  } else {
    const Side side = fx == 2 ? Side::X : Side::Y;
    for (int v : surv.on(side)) cand.push_back(slice.element(side, v));
    const auto m = static_cast<Eigen::Index>(cand.size());
    adj = Eigen::MatrixXd::Ones(m, m) - Eigen::MatrixXd::Identity(m, m);
  }
  return walk_on_adjacency(cand, adj);
}

VertexSet regular_survivors(const RegularSlice& slice) {
  const VertexSet blocked = closed_neighborhood(slice.graph(), slice.pinned());
  VertexSet out;
  for (int v = 0; v < slice.graph().vertex_count(); ++v) {
    if (!contains(blocked, v)) out.push_back(v);
  }
  return out;
}

LinkOperator regular_link_walk_closed_form(const RegularSlice& slice) {
  require_codim_two(slice);
  const VertexSet surv = regular_survivors(slice);
  const Graph gt = complement(induced_subgraph(slice.graph(), surv).graph);
  const auto m = static_cast<Eigen::Index>(surv.size());
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [u, v] : gt.edges()) {
    adj(u, v) = 1.0;
    adj(v, u) = 1.0;
  }
  return walk_on_adjacency(surv, adj);
}

NeighborGraph neighbor_graph(const OneSidedSlice& slice) {
  const BipartiteGraph& g = slice.graph();
  const VertexSet& tau = slice.pinned();
  const VertexSet ntau = open_neighborhood(g, Side::X, tau);
  NeighborGraph h;
  std::vector<VertexSet> nt;
  for (int x = 0; x < g.x_count(); ++x) {
    if (contains(tau, x)) continue;
    h.ground.push_back(x);
    VertexSet n(g.neighbors(Side::X, x).begin(), g.neighbors(Side::X, x).end());
    nt.push_back(set_difference(n, ntau));
    h.degree.push_back(static_cast<int>(nt.back().size()));
  }
  const auto m = static_cast<Eigen::Index>(h.ground.size());
  h.common = Eigen::MatrixXi::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const int c = intersection_size(nt[static_cast<std::size_t>(a)], nt[static_cast<std::size_t>(b)]);
      h.common(a, b) = c;
      h.common(b, a) = c;
    }
  }
  return h;
}

LinkOperator one_sided_link_walk_closed_form(const OneSidedSlice& slice) {
  require_codim_two(slice);
  const NeighborGraph h = neighbor_graph(slice);
  const int m = static_cast<int>(h.ground.size());
  if (m < 2) throw EmptyLink("one-sided link needs two free vertices");
  const double q = 1.0 + slice.lambda();
  LinkOperator op;
  op.ground = h.ground;
  op.P.resize(m, m);
  op.pi.resize(m);
  op.Z_u.resize(static_cast<std::size_t>(m));
  double z = 0.0;
  for (int u = 0; u < m; ++u) {
    double zu = 0.0;
    for (int v = 0; v < m; ++v) {
      const double x = u == v ? 0.0 : std::pow(q, -h.degree[static_cast<std::size_t>(v)] + h.common(u, v));
      op.P(u, v) = x;
      zu += x;
    }
    op.P.row(u) /= zu;
    op.Z_u[static_cast<std::size_t>(u)] = zu;
    z += std::pow(q, -h.degree[static_cast<std::size_t>(u)]) * zu;
  }
  // sum over unordered pairs, so that pi is a probability vector
  op.Z_tau = z / 2.0;
  for (int u = 0; u < m; ++u) {
    op.pi(u) = std::pow(q, -h.degree[static_cast<std::size_t>(u)]) * op.Z_u[static_cast<std::size_t>(u)] / (2.0 * op.Z_tau);
  }
  return op;
}

LinkOperator closed_form_link(const Slice& slice) {
  switch (slice.kind()) {
    case SliceKind::two_sided: return two_sided_link_walk_closed_form(dynamic_cast<const TwoSidedSlice&>(slice));
    case SliceKind::one_sided: return one_sided_link_walk_closed_form(dynamic_cast<const OneSidedSlice&>(slice));
    case SliceKind::regular: return regular_link_walk_closed_form(dynamic_cast<const RegularSlice&>(slice));
  }
  throw InvalidArgument("unknown slice kind");
}

}  // namespace slicewalk
