#include "sosgap/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sosgap/error.hpp"

namespace sosgap {

NoisyMatrix::NoisyMatrix(int d) : d_(d) {
  if (d < 2) fail(ErrorKind::InvalidParams, "matrix dimension must be >= 2");
  upper_.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d - 1) / 2, 0.0);
}

NoisyMatrix::NoisyMatrix(int d, std::vector<double> upper) : d_(d), upper_(std::move(upper)) {
  if (d < 2) fail(ErrorKind::InvalidParams, "matrix dimension must be >= 2");
  const auto expected = static_cast<std::size_t>(d) * static_cast<std::size_t>(d - 1) / 2;
  if (upper_.size() != expected) {
    fail(ErrorKind::InvalidParams, "expected " + std::to_string(expected) +
                                       " upper-triangle entries, got " +
                                       std::to_string(upper_.size()));
  }
  for (double v : upper_) {
    if (!std::isfinite(v)) fail(ErrorKind::InvalidParams, "matrix entries must be finite");
  }
}

void NoisyMatrix::set(int i, int j, double value) {
  if (i == j || i < 0 || j < 0 || i >= d_ || j >= d_) {
    fail(ErrorKind::InvalidParams, "off-diagonal index out of range");
  }
  if (i > j) std::swap(i, j);
  upper_[pair_index(i, j)] = value;
}

void validate(const ModelParams& p) {
  if (p.d < 2) fail(ErrorKind::InvalidParams, "d must be >= 2");
  if (p.d > 100000) fail(ErrorKind::TooLarge, "d too large");
  if (p.s_star < 2 || p.s_star > p.d) fail(ErrorKind::InvalidParams, "need 2 <= s_star <= d");
  if (!(p.beta_star >= 0.0) || !std::isfinite(p.beta_star)) {
    fail(ErrorKind::InvalidParams, "beta_star must be finite and >= 0");
  }
  if (p.kind == ModelKind::Sbm) {
    if (p.beta_star > 1.0) fail(ErrorKind::InvalidParams, "sbm requires beta_star <= 1");
    if (!(p.beta_tilde >= 0.0) || p.beta_tilde > p.beta_star) {
      fail(ErrorKind::InvalidParams, "sbm requires 0 <= beta_tilde <= beta_star");
    }
    return;
  }
  if (const auto* g = std::get_if<GaussianNoise>(&p.noise)) {
    if (!(g->sigma >= 0.0) || !std::isfinite(g->sigma)) {
      fail(ErrorKind::InvalidParams, "sigma must be finite and >= 0");
    }
  } else {
    const auto& r = std::get<RademacherNoise>(p.noise);
    if (!(r.nu > 0.0) || !std::isfinite(r.nu)) {
      fail(ErrorKind::InvalidParams, "nu must be finite and > 0");
    }
    if (p.beta_star != 0.0) {
      fail(ErrorKind::RademacherWithSignal, "Rademacher noise is a null (beta_star = 0) model");
    }
  }
}

std::vector<int> sample_support(int d, int s, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < s; ++k) {
    std::uniform_int_distribution<int> pick(k, d - 1);
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(pick(rng))]);
  }
  std::vector<int> support(perm.begin(), perm.begin() + s);
  std::sort(support.begin(), support.end());
  return support;
}

namespace {

std::vector<char> membership(int d, std::span<const int> support) {
  std::vector<char> in(static_cast<std::size_t>(d), 0);
  for (int v : support) in[static_cast<std::size_t>(v)] = 1;
  return in;
}

void check_support(const ModelParams& p, std::span<const int> support) {
  if (static_cast<int>(support.size()) != p.s_star) {
    fail(ErrorKind::InvalidSupport, "support size differs from s_star");
  }
  std::vector<int> sorted(support.begin(), support.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorKind::InvalidSupport, "support has repeated vertices");
  }
  for (int v : sorted) {
    if (v < 0 || v >= p.d) fail(ErrorKind::InvalidSupport, "support vertex out of range");
  }
}

}  // namespace

NoisyMatrix mean_matrix(const ModelParams& p, std::span<const int> support) {
  check_support(p, support);
  const auto in = membership(p.d, support);
  const double outside = p.kind == ModelKind::Sbm ? p.beta_tilde : 0.0;
  NoisyMatrix theta(p.d);
  for (int i = 0; i < p.d; ++i) {
    for (int j = i + 1; j < p.d; ++j) {
      const bool inside = in[static_cast<std::size_t>(i)] && in[static_cast<std::size_t>(j)];
      theta.set(i, j, inside ? p.beta_star : outside);
    }
  }
  return theta;
}

// Stream layout (fixed, relied on for replay): support draws first, then one
// draw per upper-triangle entry in row-major order.
PlantedInstance gen_submatrix(const ModelParams& p) {
  if (p.kind != ModelKind::Submatrix) fail(ErrorKind::InvalidParams, "expected a submatrix model");
  validate(p);
  Rng rng(p.seed);
  auto support = sample_support(p.d, p.s_star, rng);
  NoisyMatrix x = mean_matrix(p, support);
  std::vector<double> upper(x.upper().begin(), x.upper().end());
  if (const auto* g = std::get_if<GaussianNoise>(&p.noise)) {
    std::normal_distribution<double> z(0.0, 1.0);
    for (double& v : upper) {
      const double noise = g->sigma * z(rng);
      v = g->sigma == 0.0 ? v : v + noise;
    }
  } else {
    const double nu = std::get<RademacherNoise>(p.noise).nu;
    std::bernoulli_distribution coin(0.5);
    for (double& v : upper) v = coin(rng) ? nu : -nu;
  }
  return {NoisyMatrix(p.d, std::move(upper)), std::move(support), p};
}

PlantedInstance gen_sbm(const ModelParams& p) {
  if (p.kind != ModelKind::Sbm) fail(ErrorKind::InvalidParams, "expected an sbm model");
  validate(p);
  Rng rng(p.seed);
  auto support = sample_support(p.d, p.s_star, rng);
  const auto in = membership(p.d, support);
  std::bernoulli_distribution inside(p.beta_star);
  std::bernoulli_distribution outside(p.beta_tilde);
  NoisyMatrix a(p.d);
  for (int i = 0; i < p.d; ++i) {
    for (int j = i + 1; j < p.d; ++j) {
      const bool both = in[static_cast<std::size_t>(i)] && in[static_cast<std::size_t>(j)];
      const bool edge = both ? inside(rng) : outside(rng);
      a.set(i, j, edge ? 1.0 : 0.0);
    }
  }
  return {std::move(a), std::move(support), p};
}

PlantedInstance generate(const ModelParams& p) {
  return p.kind == ModelKind::Sbm ? gen_sbm(p) : gen_submatrix(p);
}

}  // namespace sosgap
