#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sosgap/models.hpp"
#include "sosgap/rational.hpp"
#include "sosgap/subsets.hpp"

namespace sosgap {

struct LinearTerm {
  int var = 0;
  double coeff = 0.0;
};

struct LinearConstraint {
  std::vector<LinearTerm> terms;
  double rhs = 0.0;
};

/// maximize (objective . y) / scale
/// subject to constraints (equalities in y) and M(y) PSD, where
/// M(y)_{r,c} = y[entry(r, c)].
struct SosProgram {
  int dim = 0;
  int var_count = 0;
  std::vector<LinearTerm> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<int> entry_map;  // dim x dim, row-major, symmetric
  double scale = 1.0;

  int entry(int r, int c) const {
    return entry_map[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) +
                     static_cast<std::size_t>(c)];
  }
};

/// Level-ell relaxation over set-indexed moments y_S, |S| <= 2 ell:
///   y_{} = 1,
///   sum_{i not in S} y_{S+i} = (s - |S|) y_S   for |S| <= 2 ell - 1,
///   [y_{A u B}]_{|A|,|B| <= ell} PSD,
///   objective 2/(s(s-1)) sum_{i<j} X_ij y_{ij}.
SosProgram assemble_level(const NoisyMatrix& x, int s_star, int ell,
                          const IndexerLimits& limits = {});

/// The (d+1) x (d+1) basic relaxation over Pi with one variable per upper
/// cell: Pi_00 = 1, sum_i Pi_i0 = s, Pi_ii = Pi_i0, Pi PSD.
SosProgram assemble_basic(const NoisyMatrix& x, int s_star);

/// Set-indexed level-1 program keeping only the S = {} row-sum equality,
/// i.e. the constraints of the basic relaxation in reduced form.
SosProgram assemble_reduced_basic(const NoisyMatrix& x, int s_star);

Eigen::MatrixXd assemble_matrix(const SosProgram& program, std::span<const double> y);

/// Averages the cells that share a variable.
std::vector<double> read_variables(const SosProgram& program, const Eigen::MatrixXd& m);

double program_value(const SosProgram& program, std::span<const double> y);
double max_equality_violation(const SosProgram& program, std::span<const double> y);

/// y_T = 1(T subset of support) in the level program's variable order.
std::vector<double> indicator_point(const SubsetIndexer& idx, SubsetKey support);

nlohmann::json program_to_json(const SosProgram& program);

/// Exact pseudo-moments on subsets of size <= 2 ell.
struct PseudoExpectation {
  int d = 0;
  int ell = 0;
  int s_star = 0;
  std::unordered_map<SubsetKey, Rational> values;

  /// Throws MissingValue when the key is absent.
  const Rational& at(SubsetKey s) const;
};

/// M_{r,c} = pe(S_r u S_c) as doubles.
Eigen::MatrixXd moment_matrix(const PseudoExpectation& pe, const SubsetIndexer& idx);

/// 2/(s(s-1)) sum_{i<j} X_ij pe({i,j}) in floating point.
double objective_value(const NoisyMatrix& x, const PseudoExpectation& pe, int s_star);

}  // namespace sosgap
