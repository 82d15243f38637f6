#include "sosgap/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "sosgap/error.hpp"

namespace sosgap {

void validate(const SolverOptions& o) {
  if (!(o.tol > 0.0)) fail(ErrorKind::InvalidParams, "solver tol must be > 0");
  if (o.max_iter < 1) fail(ErrorKind::InvalidParams, "solver max_iter must be >= 1");
  if (!(o.step > 0.0)) fail(ErrorKind::InvalidParams, "solver step must be > 0");
  if (!(o.relaxation > 0.0 && o.relaxation < 2.0)) fail(ErrorKind::InvalidParams, "relaxation must lie in (0, 2)");
  if (o.adapt_every < 1) fail(ErrorKind::InvalidParams, "adapt_every must be >= 1");
  if (!(o.step_min > 0.0) || o.step_min > o.step_max) {
    fail(ErrorKind::InvalidParams, "need 0 < step_min <= step_max");
  }
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_of(const Eigen::MatrixXd& s,
                                                        bool vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      s, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorKind::EigFailure, "eigensolver did not converge");
  return es;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) fail(ErrorKind::InvalidParams, "matrix must be square");
  return 0.5 * (s + s.transpose());
}

/// Weighted projection onto {y : B y = b} in the metric diag(counts).
class AffineProjector {
 public:
  AffineProjector(const SosProgram& p, const Eigen::VectorXd& counts) : b_(p.constraints.size()) {
    const auto m = static_cast<Eigen::Index>(p.constraints.size());
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& c = p.constraints[static_cast<std::size_t>(k)];
      for (const auto& t : c.terms) triplets.emplace_back(k, t.var, t.coeff);
      b_(k) = c.rhs;
    }
    b_matrix_.resize(m, p.var_count);
    b_matrix_.setFromTriplets(triplets.begin(), triplets.end());
    inv_counts_ = counts.cwiseInverse();

    Eigen::SparseMatrix<double> scaled = b_matrix_ * inv_counts_.asDiagonal();
    const Eigen::MatrixXd normal = Eigen::MatrixXd(scaled * b_matrix_.transpose());
    // Rows of B can be dependent for small d; a pseudo-inverse handles that
    // because b is always in range (the integral points are feasible).
    const auto es = eigen_of(normal, true);
    const Eigen::VectorXd lambda = es.eigenvalues();
    const double cutoff = 1e-11 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
    Eigen::VectorXd inv(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) inv(i) = lambda(i) > cutoff ? 1.0 / lambda(i) : 0.0;
    pinv_ = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  }

  void project(Eigen::VectorXd& y) const {
    const Eigen::VectorXd r = b_matrix_ * y - b_;
    const Eigen::VectorXd mu = pinv_ * r;
    y -= inv_counts_.asDiagonal() * (b_matrix_.transpose() * mu);
  }

  double max_violation(const Eigen::VectorXd& y) const {
    if (b_.size() == 0) return 0.0;
    return (b_matrix_ * y - b_).cwiseAbs().maxCoeff();
  }

 private:
  Eigen::SparseMatrix<double> b_matrix_;
  Eigen::VectorXd b_;
  Eigen::VectorXd inv_counts_;
  Eigen::MatrixXd pinv_;
};

}  // namespace

EigenRange eigen_range(const Eigen::MatrixXd& s) {
  const auto es = eigen_of(symmetrized(s), false);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s) {
  const auto es = eigen_of(symmetrized(s), true);
  const Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd out = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

SdpSolution solve(const SosProgram& p, const SolverOptions& o) {
  validate(o);
  if (p.dim < 1 || p.var_count < 1) fail(ErrorKind::InvalidParams, "empty program");
  if (p.entry_map.size() != static_cast<std::size_t>(p.dim) * static_cast<std::size_t>(p.dim)) {
    fail(ErrorKind::InvalidParams, "entry_map has the wrong size");
  }
  if (static_cast<int>(p.constraints.size()) > o.max_constraint_rows) {
    fail(ErrorKind::TooLarge, std::to_string(p.constraints.size()) +
                                  " equality constraints exceed the solver budget");
  }
  const Eigen::Index n = p.dim;
  const Eigen::Index nv = p.var_count;
  const auto cells = static_cast<std::size_t>(n * n);

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(nv);
  for (int v : p.entry_map) {
    if (v < 0 || v >= p.var_count) fail(ErrorKind::InvalidParams, "entry_map variable out of range");
    counts(v) += 1.0;
  }
  if (counts.minCoeff() == 0.0) fail(ErrorKind::InvalidParams, "a variable does not appear in the matrix");
  for (const auto& c : p.constraints) {
    for (const auto& t : c.terms) {
      if (t.var < 0 || t.var >= p.var_count) fail(ErrorKind::InvalidParams, "constraint variable out of range");
    }
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(nv);
  for (const auto& t : p.objective) cost(t.var) += t.coeff / p.scale;

  const AffineProjector affine(p, counts);
  const auto lift = [&](const Eigen::VectorXd& y) {
    Eigen::MatrixXd m(n, n);
    double* out = m.data();  // column-major; entry_map is symmetric
    for (std::size_t k = 0; k < cells; ++k) out[k] = y(p.entry_map[k]);
    return m;
  };

  double rho = o.step;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(nv);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd my(n, n);
  Eigen::VectorXd gathered(nv);

  SdpSolution sol;
  double primal = 0.0;
  double dual = 0.0;
  int iter = 0;
  for (iter = 1; iter <= o.max_iter; ++iter) {
    // y-step: diagonal solve, then affine projection.
    const Eigen::MatrixXd w = z - u;
    gathered.setZero();
    const double* wd = w.data();
    for (std::size_t k = 0; k < cells; ++k) gathered(p.entry_map[k]) += wd[k];
    y = (gathered + cost / rho).cwiseQuotient(counts);
    affine.project(y);
    my = lift(y);

    const Eigen::MatrixXd z_prev = z;
    const Eigen::MatrixXd relaxed = o.relaxation * my + (1.0 - o.relaxation) * z_prev;
    z = project_psd(relaxed + u);
    u += relaxed - z;

    const double value = cost.dot(y);
    primal = affine.max_violation(y) + (my - z).norm();
    dual = rho * (z - z_prev).norm();
    const double target = o.tol * (1.0 + std::abs(value));
    if (primal <= target && dual <= target) {
      const auto range = eigen_range(my);
      if (range.min >= -o.tol * std::max(1.0, range.max)) {
        sol.status = SdpStatus::Optimal;
        break;
      }
    }
    if (iter % o.adapt_every == 0) {
      double next = rho;
      if (primal > o.adapt_ratio * dual) {
        next = std::min(rho * 2.0, o.step_max);
      } else if (dual > o.adapt_ratio * primal) {
        next = std::max(rho / 2.0, o.step_min);
      }
      u *= rho / next;  // scaled dual follows the penalty
      rho = next;
    }
  }

  sol.iterations = std::min(iter, o.max_iter);
  sol.variables.assign(y.data(), y.data() + y.size());
  sol.value = cost.dot(y);
  sol.matrix = my;
  sol.primal_residual = primal;
  sol.dual_residual = dual;
  const auto range = eigen_range(my);
  sol.min_eigenvalue = range.min;
  sol.max_eigenvalue = range.max;
  sol.final_step = rho;
  return sol;
}

}  // namespace sosgap
