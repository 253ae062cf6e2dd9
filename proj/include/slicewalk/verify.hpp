#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slicewalk/graph.hpp"
#include "slicewalk/slices.hpp"
#include "slicewalk/spectra.hpp"

namespace slicewalk {

constexpr double kBoundTol = 1e-9;

// Exhaustive over codim-2 faces up to exhaustive_cap, otherwise sample_size
// distinct faces obtained by truncating facets visited by the down-up walk.
struct LinkPolicy {
  std::size_t exhaustive_cap = 100000;
  std::size_t sample_size = 10000;
  std::uint64_t seed = 0;
};

struct IdentityCheck {
  bool holds = true;
  double max_deviation = 0.0;
};

struct PsdChainCheck {
  bool hypothesis_met = true;
  int max_common = 0;                 // largest |N_t(u) n N_t(v)|, u != v
  int max_double_partners = 0;        // largest number of v sharing exactly 2 with some u
  std::optional<PsdResult> goal1;     // (1+l)^{A_H} <= 11' + l A_{G^2[X_t]} + (l^2-1) I; gated
  std::optional<PsdResult> goal3;     // (1+l)^{A_H} <= 11' + l A_H + (l^2-1) I; gated
  PsdResult goal4;                    // A_H <= A_{G^2[X_t]}
  bool all_hold() const {
    return goal4.holds && (!goal1 || goal1->holds) && (!goal3 || goal3->holds);
  }
};

struct LinkRecord {
  Facet tau;
  std::string label;
  std::string face_type;  // cross, same_x, same_y, one_sided, regular
  int link_size = 0;
  double lambda2 = 0.0;
  std::optional<double> bound;  // empty when vacuous or hypotheses fail
  bool vacuous = false;
  bool hypothesis_met = true;
  bool pass = true;             // lambda2 <= bound + 1e-9 (true when not checked)
  double margin = 0.0;          // bound - lambda2

  // regular slice: bound with denominator |W| - 1 - Delta
  std::optional<double> corrected_bound;
  std::optional<bool> corrected_pass;
  // two-sided cross / regular: lambda2 of the link adjacency against lambda2(A_G) / -lambda_min - 1
  std::optional<double> adjacency_lambda2;
  std::optional<double> adjacency_bound;
  std::optional<bool> adjacency_pass;
  // one-sided
  std::optional<double> delta_tau;
  std::optional<double> intermediate_bound;  // max_u c / Z_u before the averaging step
  std::optional<IdentityCheck> identity;
  std::optional<PsdChainCheck> psd;
};

struct VerificationReport {
  std::string lemma;     // two_sided, one_sided, regular
  std::string coverage;  // exhaustive, sampled
  double graph_lambda2 = 0.0;
  double graph_lambda_min = 0.0;
  int max_degree = 0;
  std::vector<LinkRecord> links;

  std::size_t checked = 0;  // links with a bound evaluated
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t vacuous = 0;
  std::size_t hypothesis_failed = 0;
  std::size_t empty_links = 0;  // candidate faces whose link has no edge
  double pass_rate = 1.0;
  std::optional<double> worst_margin;

  std::size_t corrected_failed = 0;
  std::size_t adjacency_failed = 0;
  std::size_t identity_failed = 0;
  double identity_max_deviation = 0.0;
  std::size_t psd_failed = 0;
  std::size_t psd_skipped = 0;
  std::optional<InterlacingResult> complement_check;

  bool all_pass() const { return failed == 0; }
};

VerificationReport verify_top_link_two_sided(const BipartiteGraph& g, int k_x, int k_y, const LinkPolicy& policy = {});
VerificationReport verify_top_link_one_sided(const BipartiteGraph& g, int k, double lambda, const LinkPolicy& policy = {},
                                             bool with_identities = true);
VerificationReport verify_top_link_regular(const Graph& g, int k, const LinkPolicy& policy = {});

// Pi_t P_t against (1/(2 Z_t)) Pi~ (1+l)^{A_H} Pi~, with the left side built by
// enumerating the link and the right side from the tau-neighbor graph.
IdentityCheck verify_matrix_exponent_identity(const BipartiteGraph& g, int k, double lambda, const Facet& tau,
                                              double tol = 1e-10);
PsdChainCheck verify_psd_chain(const BipartiteGraph& g, int k, double lambda, const Facet& tau, double tol = kBoundTol);

// Codimension-2 faces of each family, sorted. Returns std::nullopt from the
// exhaustive variant when the count exceeds cap.
std::optional<std::vector<Facet>> codim2_faces_exhaustive(const Slice& top, std::size_t cap);
std::vector<Facet> codim2_faces_sampled(SlicePtr top, std::size_t count, std::uint64_t seed);

}  // namespace slicewalk
