#include "sosgap/subsets.hpp"

#include <limits>

#include "sosgap/error.hpp"

namespace sosgap {

SubsetKey make_subset(const std::vector<int>& elements) {
  SubsetKey s = 0;
  for (int e : elements) {
    if (e < 0 || e >= kMaxVertices) fail(ErrorKind::InvalidParams, "subset element out of range");
    s |= singleton(e);
  }
  return s;
}

std::vector<int> subset_elements(SubsetKey s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(subset_size(s)));
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

std::string subset_to_string(SubsetKey s) {
  std::string out = "{";
  bool first = true;
  for (int e : subset_elements(s)) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

bool lex_less(SubsetKey a, SubsetKey b) noexcept {
  while (a != 0 && b != 0) {
    const int ea = std::countr_zero(a);
    const int eb = std::countr_zero(b);
    if (ea != eb) return ea < eb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

std::vector<SubsetKey> subsets_of_size(int d, int k) {
  std::vector<SubsetKey> out;
  if (k < 0 || k > d) return out;
  if (k == 0) return {SubsetKey{0}};
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    SubsetKey s = 0;
    for (int e : c) s |= singleton(e);
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == d - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::vector<SubsetKey> subsets_up_to(int d, int max_size) {
  std::vector<SubsetKey> out;
  for (int k = 0; k <= std::min(max_size, d); ++k) {
    auto level = subsets_of_size(d, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t binomial_prefix_sum(int d, int k) {
  std::uint64_t total = 0;
  for (int j = 0; j <= std::min(k, d); ++j) {
    const auto b = binomial_u64(d, j);
    if (total > std::numeric_limits<std::uint64_t>::max() - b) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total += b;
  }
  return total;
}

SubsetIndexer::SubsetIndexer(int d, int ell, const IndexerLimits& limits) : d_(d), ell_(ell) {
  if (ell < 1) fail(ErrorKind::InvalidParams, "ell must be >= 1");
  if (d < 1) fail(ErrorKind::InvalidParams, "d must be >= 1");
  if (d > kMaxVertices) fail(ErrorKind::TooLarge, "subset indexing supports d <= 64");
  const auto rows = binomial_prefix_sum(d, ell);
  const auto vars = binomial_prefix_sum(d, 2 * ell);
  if (rows > limits.max_rows || vars > limits.max_vars) {
    fail(ErrorKind::TooLarge, "subset index of size " + std::to_string(rows) + " rows / " +
                                  std::to_string(vars) + " variables exceeds the budget");
  }
  rows_ = subsets_up_to(d, ell);
  vars_ = subsets_up_to(d, 2 * ell);
  row_of_.reserve(rows_.size());
  var_of_.reserve(vars_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) row_of_.emplace(rows_[i], static_cast<int>(i));
  for (std::size_t i = 0; i < vars_.size(); ++i) var_of_.emplace(vars_[i], static_cast<int>(i));
}

int SubsetIndexer::row_index(SubsetKey s) const {
  const auto it = row_of_.find(s);
  return it == row_of_.end() ? -1 : it->second;
}

int SubsetIndexer::var_index(SubsetKey s) const {
  const auto it = var_of_.find(s);
  return it == var_of_.end() ? -1 : it->second;
}

}  // namespace sosgap
