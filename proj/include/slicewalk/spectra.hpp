#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "slicewalk/graph.hpp"

namespace slicewalk {

constexpr int kDefaultDenseCap = 4096;

// Symmetric real matrix. Construction checks symmetry (1e-12 entrywise) and finiteness.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(Eigen::MatrixXd m, double sym_tol = 1e-12);
  static DenseSymMatrix zeros(int n) { return DenseSymMatrix(Eigen::MatrixXd::Zero(n, n)); }
  static DenseSymMatrix identity(int n) { return DenseSymMatrix(Eigen::MatrixXd::Identity(n, n)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

enum class SpectrumMethod { automatic, dense, iterative };
std::string to_string(SpectrumMethod m);
SpectrumMethod spectrum_method_from_string(const std::string& s);

struct SpectrumSummary {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_min = 0.0;
  SpectrumMethod method = SpectrumMethod::dense;
  double residual = 0.0;  // largest ||Mv - lv|| over the reported pairs
  int iterations = 0;     // iterative path only
};

struct SpectraOptions {
  SpectrumMethod method = SpectrumMethod::automatic;
  int dense_cap = kDefaultDenseCap;
  int auto_dense_below = 1024;  // automatic: dense when the graph has fewer vertices
  double tol = 1e-10;           // successive Rayleigh quotients
  int max_iter = 1000000;
};

DenseSymMatrix adjacency_matrix(const Graph& g, int dense_cap = kDefaultDenseCap);
// Vertex order: X then Y.
DenseSymMatrix adjacency_matrix(const BipartiteGraph& g, int dense_cap = kDefaultDenseCap);

// All eigenvalues, ascending.
Eigen::VectorXd eigenvalues(const DenseSymMatrix& m);
SpectrumSummary eigen_summary(const DenseSymMatrix& m);

// Largest, second largest and smallest adjacency eigenvalue. The iterative
// path needs a regular graph (its top eigenvectors are known and deflated).
SpectrumSummary graph_spectrum(const Graph& g, const SpectraOptions& opt = {});
SpectrumSummary graph_spectrum(const BipartiteGraph& g, const SpectraOptions& opt = {});

struct PsdResult {
  bool holds = true;
  double min_eigenvalue = 0.0;  // of B - A
  Eigen::VectorXd witness;       // eigenvector for min_eigenvalue when !holds
};

// A <= B in the Loewner order, up to tol.
PsdResult psd_dominance(const DenseSymMatrix& a, const DenseSymMatrix& b, double tol);

struct InterlacingResult {
  bool holds = true;
  double lhs = 0.0;  // lambda_2 of the complement
  double rhs = 0.0;  // bipartite: lambda_2(G); regular: -lambda_min(G) - 1
};

// lambda_2 of the bipartite complement is at most lambda_2(G).
InterlacingResult complement_interlacing_check(const BipartiteRegularGraph& g, double tol = 1e-9);
// lambda_2 of the complement is at most -lambda_min(G) - 1.
InterlacingResult complement_interlacing_check(const RegularGraph& g, double tol = 1e-9);

}  // namespace slicewalk
