#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sosgap/sos_program.hpp"

namespace sosgap {

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 100000;
  /// Initial ADMM penalty. Doubled or halved every `adapt_every` iterations
  /// when the residuals differ by more than `adapt_ratio`, kept in
  /// [step_min, step_max].
  double step = 1.0;
  int adapt_every = 100;
  double adapt_ratio = 10.0;
  double step_min = 1e-4;
  double step_max = 1e4;
  /// Over-relaxation factor alpha in (0, 2); 1 is plain ADMM.
  double relaxation = 1.6;
  /// The affine projection factors a dense (#constraints)^2 matrix.
  int max_constraint_rows = 4000;
};

void validate(const SolverOptions& options);

enum class SdpStatus { Optimal, MaxIterReached };

struct SdpSolution {
  SdpStatus status = SdpStatus::MaxIterReached;
  double value = 0.0;           // objective / scale at `variables`
  Eigen::MatrixXd matrix;       // M(variables)
  std::vector<double> variables;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double min_eigenvalue = 0.0;  // of `matrix`
  double max_eigenvalue = 0.0;
  int iterations = 0;
  double final_step = 0.0;
};

struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};

/// Extreme eigenvalues of a symmetric matrix. Throws EigFailure.
EigenRange eigen_range(const Eigen::MatrixXd& s);

/// Nearest PSD matrix in Frobenius norm: symmetrize, clamp negative
/// eigenvalues to zero, recompose. Throws EigFailure.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s);

/// ADMM on  max c.y  s.t.  By = b,  M(y) = Z,  Z PSD.
///
/// Each iteration:
///   y <- argmin_{By=b} -c.y/scale + (rho/2) ||M(y) - Z + U||_F^2
///   R <- alpha M(y) + (1 - alpha) Z
///   Z <- project_psd(R + U)
///   U <- U + R - Z
/// The y-step is a diagonal solve (M^T M counts the cells per variable)
/// followed by a weighted projection onto By = b through a pseudo-inverse
/// of B N^-1 B^T computed once.
///
/// Residuals:
///   primal = max_k |B_k y - b_k| + ||M(y) - Z||_F
///   dual   = rho ||Z - Z_prev||_F
/// Optimal when both are <= tol (1 + |value|) and
/// lambda_min(M(y)) >= -tol max(1, lambda_max(M(y))).
SdpSolution solve(const SosProgram& program, const SolverOptions& options = {});

}  // namespace sosgap
