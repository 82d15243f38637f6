#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sosgap/models.hpp"
#include "sosgap/rational.hpp"
#include "sosgap/sos_program.hpp"
#include "sosgap/subsets.hpp"

namespace sosgap {

enum class PositivityMode {
  SignPositive,  // edge iff X_ij > 0
  BinaryOne,     // edge iff A_ij == 1; input must be {0,1}
};

/// Off-diagonal support of sign(X + nu I) or A + I. The diagonal is positive
/// by construction and is never stored.
class PositivityGraph {
 public:
  explicit PositivityGraph(int d);

  int d() const noexcept { return d_; }
  void add_edge(int i, int j);
  bool has_edge(int i, int j) const noexcept {
    return (adjacency_[static_cast<std::size_t>(i)] >> j) & 1U;
  }
  /// Neighbours of i as a bitmask.
  SubsetKey neighbours(int i) const noexcept {
    return adjacency_[static_cast<std::size_t>(i)];
  }
  std::vector<std::pair<int, int>> edges() const;
  std::size_t edge_count() const;

 private:
  int d_;
  std::vector<SubsetKey> adjacency_;
};

PositivityGraph positivity_graph(const NoisyMatrix& x, PositivityMode mode);

/// eta(S) = number of 2 ell-cliques containing S. Subsets not stored have
/// eta = 0.
struct ExpansivityTable {
  int d = 0;
  int ell = 0;
  std::unordered_map<SubsetKey, std::uint64_t> counts;
  std::uint64_t clique_count = 0;  // eta({})

  std::uint64_t eta(SubsetKey s) const;
};

struct CliqueBudget {
  std::uint64_t max_cliques = 10'000'000;
  int max_clique_size = 8;  // 2 ell
};

ExpansivityTable expansivity_table(const PositivityGraph& g, int ell,
                                   const CliqueBudget& budget = {},
                                   bool parallel = true);

namespace kernels {

/// One pass over the 2 ell-cliques; each clique increments all 2^{2 ell}
/// of its subsets.
ExpansivityTable expansivity_reference(const PositivityGraph& g, int ell,
                                       const CliqueBudget& budget);

/// Cliques partitioned by smallest vertex across threads; per-thread tables
/// are summed.
ExpansivityTable expansivity_parallel(const PositivityGraph& g, int ell,
                                      const CliqueBudget& budget);

}  // namespace kernels

/// Number of subsets S, |S| <= 2 ell - 1, for which
/// sum_{i not in S} eta(S + i) != (2 ell - |S|) eta(S). Checks every subset.
std::uint64_t expansivity_identity_failures(const ExpansivityTable& table);

/// pe(S) = eta(S)/eta({}) * (s)_k / (2 ell)_k, k = |S|, on every subset of
/// size <= 2 ell. Throws CertificateUndefined when eta({}) = 0.
PseudoExpectation build_certificate(const ExpansivityTable& table, int s_star, int ell);

/// Relative PSD tolerance: psd iff lambda_min >= -kPsdTolerance max(1, lambda_max).
inline constexpr double kPsdTolerance = 1e-8;

struct FeasibilityReport {
  std::uint64_t eta_empty = 0;
  bool normalization_ok = false;
  Rational rowsum_max_violation;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool psd = false;
  std::optional<Rational> objective;
};

/// Exact normalization and row-sum checks, plus a floating-point PSD check of
/// the moment matrix.
FeasibilityReport verify_certificate(const PseudoExpectation& pe, int d, int s_star,
                                     int ell);

/// 2/(s(s-1)) sum_{i<j} X_ij pe({i,j}), exactly. Entries of X are taken at
/// their exact binary value.
Rational certificate_objective(const NoisyMatrix& x, const PseudoExpectation& pe,
                               int s_star);

nlohmann::json report_to_json(const FeasibilityReport& report);

struct Certification {
  ExpansivityTable table;
  PseudoExpectation pe;
  FeasibilityReport report;
};

/// graph -> eta table -> certificate -> verification -> objective.
Certification certify(const NoisyMatrix& x, PositivityMode mode, int s_star, int ell,
                      const CliqueBudget& budget = {});

}  // namespace sosgap
