#pragma once

#include <cstdint>
#include <vector>

#include "sosgap/models.hpp"

namespace sosgap {

enum class ScanStrategy { Exhaustive, BranchAndBound };

struct ScanResult {
  double value = 0.0;        // max submatrix average
  std::vector<int> support;  // lexicographically smallest maximizer
  std::uint64_t subsets_examined = 0;
};

struct ScanOptions {
  ScanStrategy strategy = ScanStrategy::BranchAndBound;
  /// Exhaustive refuses to run when C(d, s) exceeds this.
  double exhaustive_guard = 1e8;
  /// Exhaustive enumeration uses the OpenMP kernel when true.
  bool parallel = true;
};

/// Scan statistic: max over s-subsets S of sum_{(i,j) in S x S} X_ij / (s(s-1)).
/// Both strategies return bit-identical value and support.
ScanResult scan_estimate(const NoisyMatrix& x, int s_star,
                         const ScanOptions& options = {});

/// sum_{i,j} X_ij / (s(s-1)) over the whole matrix.
double avg_estimate(const NoisyMatrix& x, int s_star);

/// Largest off-diagonal entry.
double max_estimate(const NoisyMatrix& x);

/// Closed-form optimum of the linear relaxation: s/(s-1) * max entry.
double lp_estimate(const NoisyMatrix& x, int s_star);

/// Average over the given subset, computed in canonical pair order.
/// This is the exact arithmetic path every scan kernel reports through.
double subset_average(const NoisyMatrix& x, const std::vector<int>& subset);

/// sum_{i<j in subset} X_ij in lexicographic pair order.
double subset_pair_sum(const NoisyMatrix& x, const std::vector<int>& subset);

double binomial(int n, int k);

namespace kernels {

/// Plain lexicographic enumeration of all s-subsets.
ScanResult scan_exhaustive_reference(const NoisyMatrix& x, int s_star);

/// Same enumeration split across threads by leading vertex, merged with the
/// same tie rule.
ScanResult scan_exhaustive_parallel(const NoisyMatrix& x, int s_star);

/// Depth-first branch and bound in lexicographic order. See the source for
/// the bound.
ScanResult scan_branch_and_bound(const NoisyMatrix& x, int s_star);

}  // namespace kernels

}  // namespace sosgap
