#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace sosgap {

/// A subset of {0..63} as a bitmask. Supports d <= 64.
using SubsetKey = std::uint64_t;

constexpr int kMaxVertices = 64;

inline int subset_size(SubsetKey s) noexcept { return std::popcount(s); }

inline SubsetKey singleton(int i) noexcept { return SubsetKey{1} << i; }

SubsetKey make_subset(const std::vector<int>& elements);
std::vector<int> subset_elements(SubsetKey s);

/// "{}" or "{0,3,7}".
std::string subset_to_string(SubsetKey s);

/// True if the element list of a precedes that of b lexicographically.
bool lex_less(SubsetKey a, SubsetKey b) noexcept;

/// All k-subsets of {0..d-1} in lexicographic order.
std::vector<SubsetKey> subsets_of_size(int d, int k);

/// All subsets of size <= max_size ordered by (size, lexicographic).
std::vector<SubsetKey> subsets_up_to(int d, int max_size);

/// sum_{j=0}^{k} C(d, j), saturating at UINT64_MAX.
std::uint64_t binomial_prefix_sum(int d, int k);
std::uint64_t binomial_u64(int n, int k);  // saturating

struct IndexerLimits {
  std::uint64_t max_rows = 20000;
  std::uint64_t max_vars = 5'000'000;
};

/// Bijections between subsets and contiguous indices:
///   rows: subsets of size <= ell (moment matrix rows/columns),
///   vars: subsets of size <= 2*ell (pseudo-moment variables).
/// Both are ordered by (size, lexicographic), so index 0 is the empty set.
class SubsetIndexer {
 public:
  SubsetIndexer(int d, int ell, const IndexerLimits& limits = {});

  int d() const noexcept { return d_; }
  int ell() const noexcept { return ell_; }
  int row_count() const noexcept { return static_cast<int>(rows_.size()); }
  int var_count() const noexcept { return static_cast<int>(vars_.size()); }

  SubsetKey row_set(int r) const { return rows_.at(static_cast<std::size_t>(r)); }
  SubsetKey var_set(int v) const { return vars_.at(static_cast<std::size_t>(v)); }
  const std::vector<SubsetKey>& rows() const noexcept { return rows_; }
  const std::vector<SubsetKey>& vars() const noexcept { return vars_; }

  /// -1 when the subset is not indexed.
  int row_index(SubsetKey s) const;
  int var_index(SubsetKey s) const;

 private:
  int d_;
  int ell_;
  std::vector<SubsetKey> rows_;
  std::vector<SubsetKey> vars_;
  std::unordered_map<SubsetKey, int> row_of_;
  std::unordered_map<SubsetKey, int> var_of_;
};

}  // namespace sosgap
