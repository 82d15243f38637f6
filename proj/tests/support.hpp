#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "sosgap/certificate.hpp"
#include "sosgap/models.hpp"
#include "sosgap/rng.hpp"

namespace testing {

inline sosgap::NoisyMatrix gaussian_matrix(int d, std::uint64_t seed, double scale = 1.0) {
  sosgap::Rng rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  sosgap::NoisyMatrix x(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) x.set(i, j, n(rng));
  }
  return x;
}

// Small integer entries make exact ties common.
inline sosgap::NoisyMatrix integer_matrix(int d, std::uint64_t seed, int lo, int hi) {
  sosgap::Rng rng(seed);
  std::uniform_int_distribution<int> u(lo, hi);
  sosgap::NoisyMatrix x(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) x.set(i, j, u(rng));
  }
  return x;
}

inline sosgap::NoisyMatrix from_dense(const std::vector<std::vector<double>>& a) {
  const int d = static_cast<int>(a.size());
  sosgap::NoisyMatrix x(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) x.set(i, j, a[i][j]);
  }
  return x;
}

struct BruteScan {
  double value;
  std::vector<int> support;
};

// Walks every s-subset in lexicographic order; a later subset only wins on a
// strictly larger pair sum.
inline BruteScan brute_scan(const sosgap::NoisyMatrix& x, int s) {
  const int d = x.d();
  std::vector<bool> pick(d, false);
  std::fill(pick.begin(), pick.begin() + s, true);
  double best = -1e300;
  std::vector<int> arg;
  do {
    std::vector<int> subset;
    for (int i = 0; i < d; ++i) {
      if (pick[i]) subset.push_back(i);
    }
    double sum = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
      for (std::size_t b = a + 1; b < subset.size(); ++b) sum += x(subset[a], subset[b]);
    }
    if (sum > best) {
      best = sum;
      arg = subset;
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return {2.0 * best / (s * (s - 1.0)), arg};
}

inline sosgap::PositivityGraph random_graph(int d, double p, std::uint64_t seed) {
  sosgap::Rng rng(seed);
  std::bernoulli_distribution coin(p);
  sosgap::PositivityGraph g(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (coin(rng)) g.add_edge(i, j);
    }
  }
  return g;
}

// eta by definition: for each subset S of size <= 2 ell, count the 2 ell
// cliques containing it, found by scanning all 2 ell subsets.
inline std::map<std::vector<int>, std::uint64_t> brute_eta(const sosgap::PositivityGraph& g, int ell) {
  const int d = g.d();
  const int k = 2 * ell;
  std::map<std::vector<int>, std::uint64_t> eta;
  if (k > d) return eta;
  std::vector<bool> pick(d, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<int> c;
    for (int i = 0; i < d; ++i) {
      if (pick[i]) c.push_back(i);
    }
    bool clique = true;
    for (int a = 0; a < k && clique; ++a) {
      for (int b = a + 1; b < k && clique; ++b) clique = g.has_edge(c[a], c[b]);
    }
    if (!clique) continue;
    for (unsigned mask = 0; mask < (1U << k); ++mask) {
      std::vector<int> sub;
      for (int a = 0; a < k; ++a) {
        if (mask >> a & 1U) sub.push_back(c[a]);
      }
      ++eta[sub];
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return eta;
}

}  // namespace testing
