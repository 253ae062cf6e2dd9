#include "slicewalk/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "slicewalk/error.hpp"
#include "slicewalk/rng.hpp"

namespace slicewalk {

DenseSymMatrix::DenseSymMatrix(Eigen::MatrixXd m, double sym_tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw InvalidArgument("matrix is not square");
  if (!m_.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  const double asym = m_.size() == 0 ? 0.0 : (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > sym_tol) throw InvalidArgument("matrix is not symmetric (deviation " + std::to_string(asym) + ")");
}

std::string to_string(SpectrumMethod m) {
  switch (m) {
    case SpectrumMethod::automatic: return "auto";
    case SpectrumMethod::dense: return "dense";
    case SpectrumMethod::iterative: return "iterative";
  }
  return "auto";
}

SpectrumMethod spectrum_method_from_string(const std::string& s) {
  if (s == "auto") return SpectrumMethod::automatic;
  if (s == "dense") return SpectrumMethod::dense;
  if (s == "iterative") return SpectrumMethod::iterative;
  throw InvalidArgument("unknown eigen method '" + s + "' (expected auto, dense or iterative)");
}

DenseSymMatrix adjacency_matrix(const Graph& g, int dense_cap) {
  const int n = g.vertex_count();
  if (n > dense_cap) {
    throw CapExceeded("graph has " + std::to_string(n) + " vertices, dense cap is " + std::to_string(dense_cap));
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v : g.neighbors(u)) a(u, v) = 1.0;
  }
  return DenseSymMatrix(std::move(a));
}

DenseSymMatrix adjacency_matrix(const BipartiteGraph& g, int dense_cap) {
  return adjacency_matrix(g.as_graph(), dense_cap);
}

Eigen::VectorXd eigenvalues(const DenseSymMatrix& m) {
  if (m.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NotConverged("dense symmetric eigensolver failed");
  return es.eigenvalues();
}

SpectrumSummary eigen_summary(const DenseSymMatrix& m) {
  SpectrumSummary s;
  s.method = SpectrumMethod::dense;
  const int n = m.dim();
  if (n == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix());
  if (es.info() != Eigen::Success) throw NotConverged("dense symmetric eigensolver failed");
  const auto& ev = es.eigenvalues();
  const auto& vec = es.eigenvectors();
  const int i1 = n - 1;
  const int i2 = n >= 2 ? n - 2 : n - 1;
  s.lambda1 = ev(i1);
  s.lambda2 = ev(i2);
  s.lambda_min = ev(0);
  for (int i : {i1, i2, 0}) {
    const double r = (m.matrix() * vec.col(i) - ev(i) * vec.col(i)).norm();
    s.residual = std::max(s.residual, r);
  }
  return s;
}

namespace {

void adjacency_apply(const Graph& g, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  y.setZero(g.vertex_count());
  for (int u = 0; u < g.vertex_count(); ++u) {
    double acc = 0.0;
    for (int v : g.neighbors(u)) acc += x(v);
    y(u) = acc;
  }
}

void project_out(Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& basis) {
  // twice, for numerical safety
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) x -= b.dot(x) * b;
  }
}

struct PowerResult {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Top eigenvalue of a PSD operator on the orthogonal complement of `basis`
// (orthonormal, invariant under the operator).
template <typename Apply>
PowerResult power_top(int n, Apply apply, const std::vector<Eigen::VectorXd>& basis, const SpectraOptions& opt) {
  Rng rng(0x243f6a8885a308d3ULL ^ static_cast<std::uint64_t>(n));
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.uniform01() - 0.5;
  project_out(x, basis);
  PowerResult r;
  if (x.norm() == 0.0) return r;
  x.normalize();
  Eigen::VectorXd y(n);
  double prev = -1.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    apply(x, y);
    project_out(y, basis);
    const double theta = x.dot(y);
    r.iterations = it;
    const double ny = y.norm();
    if (ny == 0.0) {
      r.value = 0.0;
      return r;
    }
    if (std::abs(theta - prev) < opt.tol) {
      r.value = theta;
      r.residual = (y - theta * x).norm();
      return r;
    }
    prev = theta;
    x = y / ny;
  }
  throw NotConverged("power iteration did not converge in " + std::to_string(opt.max_iter) + " iterations");
}

bool use_dense(const SpectraOptions& opt, int n) {
  switch (opt.method) {
    case SpectrumMethod::dense: return true;
    case SpectrumMethod::iterative: return false;
    case SpectrumMethod::automatic: return n < opt.auto_dense_below;
  }
  return true;
}

}  // namespace

SpectrumSummary graph_spectrum(const Graph& g, const SpectraOptions& opt) {
  const int n = g.vertex_count();
  const auto deg = g.regular_degree();
  if (use_dense(opt, n) || n <= 1) return eigen_summary(adjacency_matrix(g, opt.dense_cap));
  if (!deg) throw InvalidArgument("iterative spectrum needs a regular graph");
  const double d = *deg;
  std::vector<Eigen::VectorXd> basis{Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)))};

  // A + dI and dI - A are PSD with the constant vector on top
  auto shifted_up = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    adjacency_apply(g, x, y);
    y += d * x;
  };
  auto shifted_down = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    adjacency_apply(g, x, y);
    y = d * x - y;
  };
  const PowerResult hi = power_top(n, shifted_up, basis, opt);
  const PowerResult lo = power_top(n, shifted_down, basis, opt);
  SpectrumSummary s;
  s.method = SpectrumMethod::iterative;
  s.lambda1 = d;
  s.lambda2 = hi.value - d;
  s.lambda_min = std::max(d - lo.value, -d);
  s.residual = std::max(hi.residual, lo.residual);
  s.iterations = hi.iterations + lo.iterations;
  return s;
}

SpectrumSummary graph_spectrum(const BipartiteGraph& g, const SpectraOptions& opt) {
  const Graph flat = g.as_graph();
  const int n = flat.vertex_count();
  const auto deg = g.regular_degree();
  if (use_dense(opt, n) || g.x_count() <= 1 || g.y_count() <= 1) {
    return eigen_summary(adjacency_matrix(flat, opt.dense_cap));
  }
  if (!deg || g.x_count() != g.y_count()) throw InvalidArgument("iterative spectrum needs a regular bipartite graph");
  const double d = *deg;
  Eigen::VectorXd ex = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd ey = Eigen::VectorXd::Zero(n);
  ex.head(g.x_count()).setConstant(1.0 / std::sqrt(static_cast<double>(g.x_count())));
  ey.tail(g.y_count()).setConstant(1.0 / std::sqrt(static_cast<double>(g.y_count())));
  std::vector<Eigen::VectorXd> basis{ex, ey};
  Eigen::VectorXd tmp(n);
  // spectrum is symmetric, so lambda_2 is the square root of the deflated top of A^2
  auto squared = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    adjacency_apply(flat, x, tmp);
    adjacency_apply(flat, tmp, y);
  };
  const PowerResult top = power_top(n, squared, basis, opt);
  SpectrumSummary s;
  s.method = SpectrumMethod::iterative;
  s.lambda1 = d;
  s.lambda2 = std::sqrt(std::max(top.value, 0.0));
  s.lambda_min = -d;
  s.residual = top.residual;
  s.iterations = top.iterations;
  return s;
}

PsdResult psd_dominance(const DenseSymMatrix& a, const DenseSymMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw InvalidArgument("psd_dominance: dimension mismatch");
  PsdResult r;
  if (a.dim() == 0) return r;
  const Eigen::MatrixXd diff = b.matrix() - a.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff);
  if (es.info() != Eigen::Success) throw NotConverged("dense symmetric eigensolver failed");
  r.min_eigenvalue = es.eigenvalues()(0);
  r.holds = r.min_eigenvalue >= -tol;
  if (!r.holds) r.witness = es.eigenvectors().col(0);
  return r;
}

InterlacingResult complement_interlacing_check(const BipartiteRegularGraph& g, double tol) {
  InterlacingResult r;
  r.lhs = eigen_summary(adjacency_matrix(bipartite_complement(g))).lambda2;
  r.rhs = eigen_summary(adjacency_matrix(g)).lambda2;
  r.holds = r.lhs <= r.rhs + tol;
  return r;
}

InterlacingResult complement_interlacing_check(const RegularGraph& g, double tol) {
  InterlacingResult r;
  r.lhs = eigen_summary(adjacency_matrix(complement(g))).lambda2;
  r.rhs = -eigen_summary(adjacency_matrix(g)).lambda_min - 1.0;
  r.holds = r.lhs <= r.rhs + tol;
  return r;
}

}  // namespace slicewalk
