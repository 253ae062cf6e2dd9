#include "slicewalk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "slicewalk/error.hpp"
#include "slicewalk/rng.hpp"
#include "slicewalk/walks.hpp"

namespace slicewalk {

namespace {

int max_degree(const Graph& g) {
  int d = 0;
  for (int v = 0; v < g.vertex_count(); ++v) d = std::max(d, g.degree(v));
  return d;
}

int max_degree(const BipartiteGraph& g) {
  int d = 0;
  for (int x = 0; x < g.x_count(); ++x) d = std::max(d, g.degree(Side::X, x));
  for (int y = 0; y < g.y_count(); ++y) d = std::max(d, g.degree(Side::Y, y));
  return d;
}

double second_eigenvalue(const Graph& g) {
  if (g.vertex_count() < 2) return 0.0;
  const Eigen::VectorXd ev = eigenvalues(adjacency_matrix(g));
  return ev(ev.size() - 2);
}

std::vector<Facet> faces_for(SlicePtr top, const LinkPolicy& policy, std::string& coverage) {
  if (auto ex = codim2_faces_exhaustive(*top, policy.exhaustive_cap)) {
    coverage = "exhaustive";
    return *ex;
  }
  coverage = "sampled";
  return codim2_faces_sampled(top, policy.sample_size, policy.seed);
}

void tally(VerificationReport& r) {
  r.checked = r.passed = r.failed = r.vacuous = r.hypothesis_failed = 0;
  r.corrected_failed = r.adjacency_failed = r.identity_failed = r.psd_failed = r.psd_skipped = 0;
  r.identity_max_deviation = 0.0;
  r.worst_margin.reset();
  for (const auto& l : r.links) {
    if (!l.hypothesis_met) ++r.hypothesis_failed;
    if (l.vacuous) ++r.vacuous;
    if (l.bound) {
      ++r.checked;
      if (l.pass) ++r.passed;
      else ++r.failed;
      r.worst_margin = r.worst_margin ? std::min(*r.worst_margin, l.margin) : l.margin;
    }
    if (l.corrected_pass && !*l.corrected_pass) ++r.corrected_failed;
    if (l.adjacency_pass && !*l.adjacency_pass) ++r.adjacency_failed;
    if (l.identity) {
      if (!l.identity->holds) ++r.identity_failed;
      r.identity_max_deviation = std::max(r.identity_max_deviation, l.identity->max_deviation);
    }
    if (l.psd) {
      if (!l.psd->all_hold()) ++r.psd_failed;
      if (!l.psd->goal3) ++r.psd_skipped;
    }
  }
  r.pass_rate = r.checked == 0 ? 1.0 : static_cast<double>(r.passed) / static_cast<double>(r.checked);
}

void set_bound(LinkRecord& rec, double bound) {
  rec.bound = bound;
  rec.margin = bound - rec.lambda2;
  rec.pass = rec.lambda2 <= bound + kBoundTol;
}

}  // namespace

std::optional<std::vector<Facet>> codim2_faces_exhaustive(const Slice& top, std::size_t cap) {
  const int want = top.facet_size() - 2;
  if (want < static_cast<int>(top.pinned().size())) throw InvalidArgument("facet size must be at least 2 beyond the pinned face");
  std::vector<Facet> out;
  std::vector<int> cur = top.pinned();
  bool overflow = false;
  auto rec = [&](auto&& self, int start) -> void {
    if (overflow) return;
    if (static_cast<int>(cur.size()) == want) {
      if (out.size() >= cap) {
        overflow = true;
        return;
      }
      Facet f = cur;
      std::sort(f.begin(), f.end());
      out.push_back(std::move(f));
      return;
    }
    for (int e = start; e < top.ground_size(); ++e) {
      if (std::find(cur.begin(), cur.end(), e) != cur.end()) continue;
      if (!top.can_add(cur, e)) continue;
      cur.push_back(e);
      self(self, e + 1);
      cur.pop_back();
      if (overflow) return;
    }
  };
  rec(rec, 0);
  if (overflow) return std::nullopt;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Facet> codim2_faces_sampled(SlicePtr top, std::size_t count, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  Rng init(derive_seed(seed, 1));
  auto chain = make_chain(top, greedy_initial_state(*top, init));
  std::set<Facet> seen;
  const auto thin = static_cast<std::uint64_t>(std::max(1, top->facet_size()));
  const std::uint64_t budget = 100 * static_cast<std::uint64_t>(count) + 1000;
  const Facet& pinned = top->pinned();
  for (std::uint64_t s = 0; s < budget && seen.size() < count; ++s) {
    for (std::uint64_t i = 0; i < thin; ++i) chain->lazy_step(rng);
    Facet f = chain->facet();
    std::vector<int> free;
    for (int e : f) {
      if (!std::binary_search(pinned.begin(), pinned.end(), e)) free.push_back(e);
    }
    const auto a = static_cast<std::size_t>(rng.uniform_index(free.size()));
    auto b = static_cast<std::size_t>(rng.uniform_index(free.size() - 1));
    if (b >= a) ++b;
    Facet tau;
    for (int e : f) {
      if (e != free[a] && e != free[b]) tau.push_back(e);
    }
    seen.insert(std::move(tau));
  }
  return {seen.begin(), seen.end()};
}

VerificationReport verify_top_link_two_sided(const BipartiteGraph& g, int k_x, int k_y, const LinkPolicy& policy) {
  if (k_x + k_y < 2) throw InvalidArgument("two-sided verification needs k_x + k_y >= 2");
  auto gp = std::make_shared<const BipartiteGraph>(g);
  auto top = std::make_shared<const TwoSidedSlice>(gp, k_x, k_y);
  VerificationReport r;
  r.lemma = "two_sided";
  const SpectrumSummary spec = graph_spectrum(g);
  r.graph_lambda2 = spec.lambda2;
  r.graph_lambda_min = spec.lambda_min;
  r.max_degree = max_degree(g);
  if (g.x_count() == g.y_count() && g.regular_degree() && g.x_count() > 0) {
    r.complement_check = complement_interlacing_check(BipartiteRegularGraph(g));
  }
  const double d = r.max_degree;
  for (const Facet& tau : faces_for(top, policy, r.coverage)) {
    TwoSidedSlice s(gp, k_x, k_y, tau);
    LinkRecord rec;
    rec.tau = tau;
    rec.label = s.format_facet(tau);
    const BiVertexSet split = s.split(tau);
    const int fx = k_x - static_cast<int>(split.x.size());
    rec.face_type = fx == 1 ? "cross" : (fx == 2 ? "same_x" : "same_y");
    LinkOperator op;
    try {
      op = two_sided_link_walk_closed_form(s);
    } catch (const EmptyLink&) {
      ++r.empty_links;
      continue;
    }
    rec.link_size = op.size();
    rec.lambda2 = op.lambda2();
    if (fx == 1) {
      const BiVertexSet surv = two_sided_survivors(s);
      const double denom = std::min(static_cast<double>(surv.x.size()) - d, static_cast<double>(surv.y.size()) - d);
      if (denom <= 0.0) {
        rec.vacuous = true;
      } else {
        set_bound(rec, r.graph_lambda2 / denom);
      }
      const BipartiteGraph gt = bipartite_complement(induced_subgraph(g, surv).graph);
      rec.adjacency_lambda2 = second_eigenvalue(gt.as_graph());
      rec.adjacency_bound = r.graph_lambda2;
      rec.adjacency_pass = *rec.adjacency_lambda2 <= r.graph_lambda2 + kBoundTol;
    } else {
      set_bound(rec, 0.0);
    }
    r.links.push_back(std::move(rec));
  }
  tally(r);
  return r;
}

VerificationReport verify_top_link_regular(const Graph& g, int k, const LinkPolicy& policy) {
  if (k < 2) throw InvalidArgument("regular verification needs k >= 2");
  auto gp = std::make_shared<const Graph>(g);
  auto top = std::make_shared<const RegularSlice>(gp, k);
  VerificationReport r;
  r.lemma = "regular";
  const SpectrumSummary spec = graph_spectrum(g);
  r.graph_lambda2 = spec.lambda2;
  r.graph_lambda_min = spec.lambda_min;
  r.max_degree = max_degree(g);
  if (auto deg = g.regular_degree(); deg && g.vertex_count() > 1) {
    r.complement_check = complement_interlacing_check(RegularGraph(g));
  }
  const double d = r.max_degree;
  const double num = -r.graph_lambda_min - 1.0;
  for (const Facet& tau : faces_for(top, policy, r.coverage)) {
    RegularSlice s(gp, k, tau);
    LinkRecord rec;
    rec.tau = tau;
    rec.label = s.format_facet(tau);
    rec.face_type = "regular";
    LinkOperator op;
    try {
      op = regular_link_walk_closed_form(s);
    } catch (const EmptyLink&) {
      ++r.empty_links;
      continue;
    }
    rec.link_size = op.size();
    rec.lambda2 = op.lambda2();
    const VertexSet surv = regular_survivors(s);
    const double w = static_cast<double>(surv.size());
    if (w - d <= 0.0) {
      rec.vacuous = true;
    } else {
      set_bound(rec, num / (w - d));
    }
    if (w - 1.0 - d > 0.0) {
      rec.corrected_bound = num / (w - 1.0 - d);
      rec.corrected_pass = rec.lambda2 <= *rec.corrected_bound + kBoundTol;
    }
    rec.adjacency_lambda2 = second_eigenvalue(complement(induced_subgraph(g, surv).graph));
    rec.adjacency_bound = num;
    rec.adjacency_pass = *rec.adjacency_lambda2 <= num + kBoundTol;
    r.links.push_back(std::move(rec));
  }
  tally(r);
  return r;
}

namespace {

struct HypothesisStats {
  int max_common = 0;
  int max_double_partners = 0;
  bool met() const { return max_common <= 2 && max_double_partners <= 1; }
};

HypothesisStats hypothesis_stats(const NeighborGraph& h) {
  HypothesisStats s;
  const auto m = h.common.rows();
  for (Eigen::Index u = 0; u < m; ++u) {
    int doubles = 0;
    for (Eigen::Index v = 0; v < m; ++v) {
      if (u == v) continue;
      s.max_common = std::max(s.max_common, h.common(u, v));
      if (h.common(u, v) == 2) ++doubles;
    }
    s.max_double_partners = std::max(s.max_double_partners, doubles);
  }
  return s;
}

}  // namespace

VerificationReport verify_top_link_one_sided(const BipartiteGraph& g, int k, double lambda, const LinkPolicy& policy,
                                             bool with_identities) {
  if (k < 2) throw InvalidArgument("one-sided verification needs k >= 2");
  if (!(lambda > 0.0)) throw InvalidArgument("one-sided verification needs lambda > 0");
  auto gp = std::make_shared<const BipartiteGraph>(g);
  auto top = std::make_shared<const OneSidedSlice>(gp, k, lambda);
  VerificationReport r;
  r.lemma = "one_sided";
  const SpectrumSummary spec = graph_spectrum(g);
  r.graph_lambda2 = spec.lambda2;
  r.graph_lambda_min = spec.lambda_min;
  r.max_degree = max_degree(g);
  const double c = lambda * r.graph_lambda2 * r.graph_lambda2 + lambda * lambda - 1.0;
  const double q = 1.0 + lambda;
  for (const Facet& tau : faces_for(top, policy, r.coverage)) {
    OneSidedSlice s(gp, k, lambda, tau);
    LinkRecord rec;
    rec.tau = tau;
    rec.label = s.format_facet(tau);
    rec.face_type = "one_sided";
    LinkOperator op;
    try {
      op = one_sided_link_walk_closed_form(s);
    } catch (const EmptyLink&) {
      ++r.empty_links;
      continue;
    }
    rec.link_size = op.size();
    rec.lambda2 = op.lambda2();
    const NeighborGraph h = neighbor_graph(s);
    double avg = 0.0;
    for (int deg : h.degree) avg += deg;
    avg /= static_cast<double>(h.degree.size());
    rec.delta_tau = avg;
    double inter = -std::numeric_limits<double>::infinity();
    for (double zu : op.Z_u) inter = std::max(inter, c / zu);
    rec.intermediate_bound = inter;
    const HypothesisStats hs = hypothesis_stats(h);
    rec.hypothesis_met = hs.met();
    if (rec.hypothesis_met) {
      const double qd = std::pow(q, avg);
      const double denom = static_cast<double>(g.x_count()) - static_cast<double>(tau.size()) - qd;
      if (denom <= 0.0) {
        rec.vacuous = true;
      } else {
        set_bound(rec, c * qd / denom);
      }
    }
    if (with_identities) {
      rec.identity = verify_matrix_exponent_identity(g, k, lambda, tau);
      rec.psd = verify_psd_chain(g, k, lambda, tau);
    }
    r.links.push_back(std::move(rec));
  }
  tally(r);
  return r;
}

IdentityCheck verify_matrix_exponent_identity(const BipartiteGraph& g, int k, double lambda, const Facet& tau, double tol) {
  auto gp = std::make_shared<const BipartiteGraph>(g);
  OneSidedSlice s(gp, k, lambda, tau);
  if (s.free_size() != 2) throw InvalidArgument("identity check needs |tau| = k - 2");
  const LinkOperator op = local_walk_exact(s);
  const NeighborGraph h = neighbor_graph(s);
  if (op.ground != h.ground) throw Error("link ground set differs from the neighbor graph");
  const auto m = static_cast<Eigen::Index>(h.ground.size());
  const double q = 1.0 + lambda;
  // normalizers from their defining sums
  Eigen::VectorXd zu(m);
  double ztau = 0.0;
  for (Eigen::Index u = 0; u < m; ++u) {
    double acc = 0.0;
    for (Eigen::Index v = 0; v < m; ++v) {
      if (u != v) acc += std::pow(q, -h.degree[static_cast<std::size_t>(v)] + h.common(u, v));
    }
    zu(u) = acc;
    ztau += std::pow(q, -h.degree[static_cast<std::size_t>(u)]) * acc;
  }
  ztau /= 2.0;
  Eigen::VectorXd pi_tilde(m);
  for (Eigen::Index u = 0; u < m; ++u) {
    const double pi_u = std::pow(q, -h.degree[static_cast<std::size_t>(u)]) * zu(u) / (2.0 * ztau);
    const double gamma_u = zu(u) / (2.0 * ztau);
    pi_tilde(u) = pi_u / gamma_u;
  }
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index u = 0; u < m; ++u) {
    for (Eigen::Index v = 0; v < m; ++v) {
      if (u != v) rhs(u, v) = pi_tilde(u) * std::pow(q, h.common(u, v)) * pi_tilde(v) / (2.0 * ztau);
    }
  }
  const Eigen::MatrixXd lhs = op.pi.asDiagonal() * op.P;
  IdentityCheck out;
  out.max_deviation = (lhs - rhs).cwiseAbs().maxCoeff();
  out.holds = out.max_deviation <= tol;
  return out;
}

PsdChainCheck verify_psd_chain(const BipartiteGraph& g, int k, double lambda, const Facet& tau, double tol) {
  auto gp = std::make_shared<const BipartiteGraph>(g);
  OneSidedSlice s(gp, k, lambda, tau);
  if (s.free_size() != 2) throw InvalidArgument("PSD chain check needs |tau| = k - 2");
  const NeighborGraph h = neighbor_graph(s);
  const auto m = static_cast<Eigen::Index>(h.ground.size());
  const double q = 1.0 + lambda;
  Eigen::MatrixXd expo = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd ah = h.common.cast<double>();
  Eigen::MatrixXd g2(m, m);
  for (Eigen::Index u = 0; u < m; ++u) {
    ah(u, u) = h.degree[static_cast<std::size_t>(u)];
    const int xu = h.ground[static_cast<std::size_t>(u)];
    for (Eigen::Index v = 0; v < m; ++v) {
      const int xv = h.ground[static_cast<std::size_t>(v)];
      if (u != v) expo(u, v) = std::pow(q, h.common(u, v));
      g2(u, v) = xu == xv ? g.degree(Side::X, xu)
                          : static_cast<double>(common_neighbors(g, {Side::X, xu}, {Side::X, xv}).size());
    }
  }
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(m, m);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
  PsdChainCheck out;
  const HypothesisStats hs = hypothesis_stats(h);
  out.max_common = hs.max_common;
  out.max_double_partners = hs.max_double_partners;
  out.hypothesis_met = hs.met();
  out.goal4 = psd_dominance(DenseSymMatrix(ah), DenseSymMatrix(g2), tol);
  if (out.hypothesis_met) {
    const double shift = lambda * lambda - 1.0;
    out.goal3 = psd_dominance(DenseSymMatrix(expo), DenseSymMatrix(ones + lambda * ah + shift * id), tol);
    out.goal1 = psd_dominance(DenseSymMatrix(expo), DenseSymMatrix(ones + lambda * g2 + shift * id), tol);
  }
  return out;
}

}  // namespace slicewalk
