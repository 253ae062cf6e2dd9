#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "slicewalk/graph.hpp"

namespace slicewalk {

// Facets and faces are sorted lists of element ids. Element ids per family:
//   two-sided: x -> x, y -> |X| + y;  one-sided: x;  regular: v.
using Facet = std::vector<int>;

constexpr std::size_t kDefaultEnumerationCap = 1000000;

enum class SliceKind { two_sided, one_sided, regular };
std::string to_string(SliceKind k);

class Slice {
 public:
  virtual ~Slice() = default;

  virtual SliceKind kind() const = 0;
  // Elements are 0 .. ground_size()-1.
  virtual int ground_size() const = 0;
  virtual int facet_size() const = 0;
  const Facet& pinned() const { return pinned_; }
  int free_size() const { return facet_size() - static_cast<int>(pinned_.size()); }

  // Whether e may join `partial` (a subset of some would-be facet, e not in it).
  virtual bool can_add(const std::vector<int>& partial, int e) const = 0;
  // Log of the facet weight up to a factor shared by all facets.
  virtual double log_weight(const Facet&) const { return 0.0; }
  bool is_facet(const Facet& f) const;

  // Same family and parameters with a different pinned face.
  virtual std::shared_ptr<const Slice> with_pinned(Facet tau) const = 0;

  virtual std::string element_label(int e) const = 0;
  // "x3 x7 | y1 y4" for two-sided facets, space separated labels otherwise.
  virtual std::string format_facet(const Facet& f) const;

 protected:
  void set_pinned(Facet tau);
  Facet pinned_;
};

using SlicePtr = std::shared_ptr<const Slice>;

// Independent sets with exactly k_x vertices in X and k_y in Y, uniform.
class TwoSidedSlice final : public Slice {
 public:
  TwoSidedSlice(std::shared_ptr<const BipartiteGraph> g, int k_x, int k_y, Facet tau = {});

  SliceKind kind() const override { return SliceKind::two_sided; }
  int ground_size() const override { return g_->x_count() + g_->y_count(); }
  int facet_size() const override { return kx_ + ky_; }
  bool can_add(const std::vector<int>& partial, int e) const override;
  SlicePtr with_pinned(Facet tau) const override;
  std::string element_label(int e) const override;
  std::string format_facet(const Facet& f) const override;

  const BipartiteGraph& graph() const { return *g_; }
  const std::shared_ptr<const BipartiteGraph>& graph_ptr() const { return g_; }
  int k_x() const { return kx_; }
  int k_y() const { return ky_; }
  bool is_x(int e) const { return e < g_->x_count(); }
  VertexRef vertex(int e) const { return is_x(e) ? VertexRef{Side::X, e} : VertexRef{Side::Y, e - g_->x_count()}; }
  int element(Side s, int i) const { return s == Side::X ? i : g_->x_count() + i; }
  BiVertexSet split(const Facet& f) const;
  Facet join(const BiVertexSet& s) const;

 private:
  std::shared_ptr<const BipartiteGraph> g_;
  int kx_;
  int ky_;
};

// k-subsets S of X with weight lambda^k (1+lambda)^{|Y \ N(S)|}.
// lambda = 0 is allowed; the distribution then uses the relative weight
// (1+lambda)^{|Y \ N(S)|}, which is uniform.
class OneSidedSlice final : public Slice {
 public:
  OneSidedSlice(std::shared_ptr<const BipartiteGraph> g, int k, double lambda, Facet tau = {});

  SliceKind kind() const override { return SliceKind::one_sided; }
  int ground_size() const override { return g_->x_count(); }
  int facet_size() const override { return k_; }
  bool can_add(const std::vector<int>& partial, int e) const override;
  double log_weight(const Facet& s) const override;
  SlicePtr with_pinned(Facet tau) const override;
  std::string element_label(int e) const override;

  const BipartiteGraph& graph() const { return *g_; }
  const std::shared_ptr<const BipartiteGraph>& graph_ptr() const { return g_; }
  int k() const { return k_; }
  double lambda() const { return lambda_; }
  // |Y \ N(S)|
  int free_count(const std::vector<int>& s) const;

 private:
  std::shared_ptr<const BipartiteGraph> g_;
  int k_;
  double lambda_;
};

// Independent sets of size k in a plain graph, uniform.
class RegularSlice final : public Slice {
 public:
  RegularSlice(std::shared_ptr<const Graph> g, int k, Facet tau = {});

  SliceKind kind() const override { return SliceKind::regular; }
  int ground_size() const override { return g_->vertex_count(); }
  int facet_size() const override { return k_; }
  bool can_add(const std::vector<int>& partial, int e) const override;
  SlicePtr with_pinned(Facet tau) const override;
  std::string element_label(int e) const override;

  const Graph& graph() const { return *g_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return g_; }
  int k() const { return k_; }

 private:
  std::shared_ptr<const Graph> g_;
  int k_;
};

// lambda^{|S|} (1+lambda)^{|Y \ N(S)|} in log space; -inf when lambda = 0 < |S|.
double one_sided_log_weight(const BipartiteGraph& g, const VertexSet& s, double lambda);
// Same quantity for a slice; throws InvalidArgument unless |S| = k.
double one_sided_weight(const OneSidedSlice& slice, const VertexSet& s);

// ---- enumeration -----------------------------------------------------------

// All facets containing the pinned face, lexicographically sorted.
std::vector<Facet> enumerate_facets(const Slice& slice, std::size_t cap = kDefaultEnumerationCap);
// True if at least one facet contains the pinned face.
bool has_facet(const Slice& slice);

struct FacetDistribution {
  std::vector<Facet> facets;
  std::vector<double> prob;
  std::size_t index_of(const Facet& f) const;  // throws if absent
};

// Throws EmptyLink when there are no facets.
FacetDistribution exact_distribution(const Slice& slice, std::size_t cap = kDefaultEnumerationCap);

// Pins face in addition to the current pinned face. Throws EmptyLink if the
// result has no facet (checked by search unless check is false).
SlicePtr link(const Slice& slice, const Facet& face, bool check = true);

// ---- local walks on codimension-2 links --------------------------------------

struct LinkOperator {
  std::vector<int> ground;   // element ids of the rows
  Eigen::MatrixXd P;         // row stochastic
  Eigen::VectorXd pi;        // stationary, sums to 1
  double Z_tau = 0.0;        // normalizer of pi (see closed forms)
  std::vector<double> Z_u;   // per-row normalizer of P
  std::vector<int> dropped;  // candidate elements with an empty row

  int size() const { return static_cast<int>(ground.size()); }
  int index_of(int element) const;  // -1 if absent
  // Eigenvalues of the pi-symmetrized matrix, descending.
  Eigen::VectorXd spectrum() const;
  double lambda2() const;
};

struct LinkDefects {
  double row_sum = 0.0;          // max |sum_v P(u,v) - 1|
  double pi_sum = 0.0;           // |sum pi - 1|
  double min_pi = 0.0;
  double detailed_balance = 0.0; // max |pi(u)P(u,v) - pi(v)P(v,u)|
  double stationarity = 0.0;     // ||pi P - pi||_1
  bool ok(double tol) const {
    return row_sum <= tol && pi_sum <= tol && min_pi > 0.0 && detailed_balance <= tol && stationarity <= 10 * tol;
  }
};
LinkDefects check_link_operator(const LinkOperator& op);

// Built from the facets containing the pinned face; needs free_size() == 2.
LinkOperator local_walk_exact(const Slice& slice, std::size_t cap = kDefaultEnumerationCap);

// Closed forms; each needs free_size() == 2.
// Cross faces (one free slot per side): walk on the bipartite complement of the
// graph induced on the surviving vertices. Same-side faces: complete graph on
// the survivors of that side.
LinkOperator two_sided_link_walk_closed_form(const TwoSidedSlice& slice);
// P(u,v) = (1+l)^{-|N_t(v)| + |N_t(u) n N_t(v)|} / Z_u,
// pi(u) = (1+l)^{-|N_t(u)|} Z_u / (2 Z_tau), with Z_tau = (1/2) sum_w (1+l)^{-|N_t(w)|} Z_w.
LinkOperator one_sided_link_walk_closed_form(const OneSidedSlice& slice);
// Walk on the complement of the graph induced on V \ (tau u N(tau)).
LinkOperator regular_link_walk_closed_form(const RegularSlice& slice);
LinkOperator closed_form_link(const Slice& slice);

// Survivor sets of a two-sided face: X \ (tau_X u N(tau_Y)) and Y \ (tau_Y u N(tau_X)).
BiVertexSet two_sided_survivors(const TwoSidedSlice& slice);
// V \ (tau u N(tau)).
VertexSet regular_survivors(const RegularSlice& slice);

// ---- tau-neighbor graph --------------------------------------------------------

struct NeighborGraph {
  std::vector<int> ground;     // X \ tau
  std::vector<int> degree;     // |N_tau(u)|
  Eigen::MatrixXi common;      // |N_tau(u) n N_tau(v)|, zero diagonal
};

// N_tau(u) = N(u) \ N(tau), over u in X \ tau.
NeighborGraph neighbor_graph(const OneSidedSlice& slice);

}  // namespace slicewalk
