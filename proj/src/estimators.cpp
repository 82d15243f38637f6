#include "sosgap/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

#include "sosgap/error.hpp"

namespace sosgap {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double subset_pair_sum(const NoisyMatrix& x, const std::vector<int>& subset) {
  double sum = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) sum += x(subset[a], subset[b]);
  }
  return sum;
}

namespace {

double average_from_pair_sum(double pair_sum, int s) {
  return 2.0 * pair_sum / (static_cast<double>(s) * static_cast<double>(s - 1));
}

void check_scan_args(const NoisyMatrix& x, int s) {
  if (s < 2 || s > x.d()) fail(ErrorKind::InvalidParams, "scan requires 2 <= s_star <= d");
}

struct Best {
  double pair_sum = -std::numeric_limits<double>::infinity();
  std::vector<int> subset;

  // Larger canonical sum wins; equal sums go to the lexicographically
  // smaller subset.
  bool improved_by(double candidate, const std::vector<int>& s) const {
    if (candidate != pair_sum) return candidate > pair_sum;
    return subset.empty() || s < subset;
  }
};

/// Shared depth-first enumeration. Incremental sums only filter leaves; a
/// leaf within `slack` of the incumbent is re-scored canonically.
class ScanSearch {
 public:
  ScanSearch(const NoisyMatrix& x, int s, bool prune)
      : x_(x), d_(x.d()), s_(s), prune_(prune),
        dense_(static_cast<std::size_t>(d_) * static_cast<std::size_t>(d_), 0.0),
        gain_(static_cast<std::size_t>(s + 1) * static_cast<std::size_t>(d_), 0.0) {
    double max_abs = 0.0;
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        const double v = x(i, j);
        dense_[idx(i, j)] = v;
        max_abs = std::max(max_abs, std::abs(v));
      }
    }
    slack_ = 1e-12 * (1.0 + max_abs * binomial(s, 2));
    chosen_.reserve(static_cast<std::size_t>(s));
  }

  void seed_incumbent(const std::vector<int>& subset) {
    best_.pair_sum = subset_pair_sum(x_, subset);
    best_.subset = subset;
  }

  /// Explores all completions of the prefix {first}.
  void run_from(int first) {
    chosen_.assign(1, first);
    for (int v = 0; v < d_; ++v) gain(1, v) = dense_[idx(first, v)];
    descend(0.0);
  }

  void run_all() {
    for (int first = 0; first + s_ <= d_; ++first) run_from(first);
  }

  const Best& best() const { return best_; }
  std::uint64_t leaves() const { return leaves_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(j);
  }
  double& gain(int depth, int v) {
    return gain_[static_cast<std::size_t>(depth) * static_cast<std::size_t>(d_) +
                 static_cast<std::size_t>(v)];
  }

  // pair_sum covers pairs inside chosen_; gain(k, v) = sum_{u in chosen_} X_uv
  // with k = |chosen_|.
  void descend(double pair_sum) {
    const int k = static_cast<int>(chosen_.size());
    if (k == s_) {
      ++leaves_;
      if (pair_sum >= best_.pair_sum - slack_) {
        const double canonical = subset_pair_sum(x_, chosen_);
        if (best_.improved_by(canonical, chosen_)) {
          best_.pair_sum = canonical;
          best_.subset = chosen_;
        }
      }
      return;
    }
    const int last = chosen_.back();
    const int remaining = s_ - k;
    if (prune_ && upper_bound(pair_sum, last, remaining) < best_.pair_sum - slack_) return;
    for (int v = last + 1; v + remaining <= d_; ++v) {
      const double next = pair_sum + gain(k, v);
      chosen_.push_back(v);
      if (k + 1 < s_) {
        for (int w = 0; w < d_; ++w) gain(k + 1, w) = gain(k, w) + dense_[idx(v, w)];
      }
      descend(next);
      chosen_.pop_back();
    }
  }

  // Bound on the best completion of chosen_ by `r` vertices from
  // C = {last+1, ..., d-1}; the minimum of two admissible bounds:
  //  (a) pair_sum + (C(s,2) - C(k,2)) * (max entry over pairs touching C),
  //  (b) pair_sum + sum of the r largest g_v over v in C, where
  //      g_v = gain(k, v) + 1/2 * (sum of the r-1 largest X_vw, w in C \ {v}).
  // (b) holds because the added weight of a completion R equals
  // sum_{v in R} [gain(k, v) + 1/2 sum_{w in R, w != v} X_vw].
  double upper_bound(double pair_sum, int last, int r) {
    const int k = static_cast<int>(chosen_.size());
    double max_touching = -std::numeric_limits<double>::infinity();
    scores_.clear();
    top_.assign(static_cast<std::size_t>(std::max(r - 1, 0)), 0.0);
    for (int v = last + 1; v < d_; ++v) {
      for (int u : chosen_) max_touching = std::max(max_touching, dense_[idx(u, v)]);
      std::fill(top_.begin(), top_.end(), -std::numeric_limits<double>::infinity());
      for (int w = last + 1; w < d_; ++w) {
        if (w == v) continue;
        const double e = dense_[idx(v, w)];
        max_touching = std::max(max_touching, e);
        insert_top(e);
      }
      double row = 0.0;
      for (double t : top_) row += std::isfinite(t) ? t : 0.0;
      scores_.push_back(gain(k, v) + 0.5 * row);
    }
    const double new_pairs = binomial(s_, 2) - binomial(k, 2);
    const double bound_a = pair_sum + new_pairs * max_touching;
    std::partial_sort(scores_.begin(), scores_.begin() + r, scores_.end(), std::greater<>());
    double bound_b = pair_sum;
    for (int i = 0; i < r; ++i) bound_b += scores_[static_cast<std::size_t>(i)];
    return std::min(bound_a, bound_b);
  }

  void insert_top(double e) {
    if (top_.empty() || e <= top_.back()) return;
    auto pos = std::upper_bound(top_.begin(), top_.end(), e, std::greater<>());
    std::move_backward(pos, top_.end() - 1, top_.end());
    *pos = e;
  }

  const NoisyMatrix& x_;
  int d_;
  int s_;
  bool prune_;
  std::vector<double> dense_;
  std::vector<double> gain_;
  std::vector<int> chosen_;
  std::vector<double> scores_;
  std::vector<double> top_;
  double slack_ = 0.0;
  Best best_;
  std::uint64_t leaves_ = 0;
};

ScanResult finish(const NoisyMatrix& x, const Best& best, std::uint64_t examined) {
  ScanResult r;
  r.support = best.subset;
  r.value = subset_average(x, r.support);
  r.subsets_examined = examined;
  return r;
}

std::vector<int> greedy_subset(const NoisyMatrix& x, int s) {
  const int d = x.d();
  int bi = 0, bj = 1;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (x(i, j) > x(bi, bj)) bi = i, bj = j;
    }
  }
  std::vector<int> subset{bi, bj};
  std::vector<char> used(static_cast<std::size_t>(d), 0);
  used[static_cast<std::size_t>(bi)] = used[static_cast<std::size_t>(bj)] = 1;
  while (static_cast<int>(subset.size()) < s) {
    int pick = -1;
    double pick_gain = -std::numeric_limits<double>::infinity();
    for (int v = 0; v < d; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      double g = 0.0;
      for (int u : subset) g += x(u, v);
      if (g > pick_gain) pick_gain = g, pick = v;
    }
    subset.push_back(pick);
    used[static_cast<std::size_t>(pick)] = 1;
  }
  std::sort(subset.begin(), subset.end());
  return subset;
}

}  // namespace

double subset_average(const NoisyMatrix& x, const std::vector<int>& subset) {
  return average_from_pair_sum(subset_pair_sum(x, subset), static_cast<int>(subset.size()));
}

namespace kernels {

ScanResult scan_exhaustive_reference(const NoisyMatrix& x, int s) {
  check_scan_args(x, s);
  ScanSearch search(x, s, false);
  search.run_all();
  return finish(x, search.best(), search.leaves());
}

ScanResult scan_exhaustive_parallel(const NoisyMatrix& x, int s) {
  check_scan_args(x, s);
  const int firsts = x.d() - s + 1;
  std::vector<Best> partial(static_cast<std::size_t>(firsts));
  std::vector<std::uint64_t> leaves(static_cast<std::size_t>(firsts), 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (int first = 0; first < firsts; ++first) {
    ScanSearch search(x, s, false);
    search.run_from(first);
    partial[static_cast<std::size_t>(first)] = search.best();
    leaves[static_cast<std::size_t>(first)] = search.leaves();
  }
  Best best;
  std::uint64_t examined = 0;
  for (int first = 0; first < firsts; ++first) {
    const auto& p = partial[static_cast<std::size_t>(first)];
    examined += leaves[static_cast<std::size_t>(first)];
    if (!p.subset.empty() && best.improved_by(p.pair_sum, p.subset)) best = p;
  }
  return finish(x, best, examined);
}

ScanResult scan_branch_and_bound(const NoisyMatrix& x, int s) {
  check_scan_args(x, s);
  ScanSearch search(x, s, true);
  search.seed_incumbent(greedy_subset(x, s));
  search.run_all();
  return finish(x, search.best(), search.leaves());
}

}  // namespace kernels

ScanResult scan_estimate(const NoisyMatrix& x, int s, const ScanOptions& options) {
  check_scan_args(x, s);
  if (options.strategy == ScanStrategy::BranchAndBound) return kernels::scan_branch_and_bound(x, s);
  const double count = binomial(x.d(), s);
  if (count > options.exhaustive_guard) {
    fail(ErrorKind::TooLarge, "exhaustive scan over C(" + std::to_string(x.d()) + ", " +
                                  std::to_string(s) + ") subsets exceeds the guard");
  }
  return options.parallel ? kernels::scan_exhaustive_parallel(x, s)
                          : kernels::scan_exhaustive_reference(x, s);
}

double avg_estimate(const NoisyMatrix& x, int s) {
  if (s < 2) fail(ErrorKind::InvalidParams, "avg requires s_star >= 2");
  double sum = 0.0;
  for (double v : x.upper()) sum += v;
  return average_from_pair_sum(sum, s);
}

double max_estimate(const NoisyMatrix& x) {
  return *std::max_element(x.upper().begin(), x.upper().end());
}

double lp_estimate(const NoisyMatrix& x, int s) {
  if (s < 2) fail(ErrorKind::InvalidParams, "lp requires s_star >= 2");
  return static_cast<double>(s) / static_cast<double>(s - 1) * max_estimate(x);
}

}  // namespace sosgap
