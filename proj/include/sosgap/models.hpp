#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "sosgap/rng.hpp"

namespace sosgap {

/// Symmetric d x d matrix with zero diagonal; only the strict upper triangle
/// is stored, row-major: (0,1), (0,2), ..., (0,d-1), (1,2), ...
/// Vertices are 0-indexed.
class NoisyMatrix {
 public:
  explicit NoisyMatrix(int d);
  NoisyMatrix(int d, std::vector<double> upper);

  int d() const noexcept { return d_; }
  std::size_t pair_count() const noexcept { return upper_.size(); }

  /// Symmetric accessor; (i,i) is 0.
  double operator()(int i, int j) const noexcept {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return upper_[pair_index(i, j)];
  }
  void set(int i, int j, double value);

  std::span<const double> upper() const noexcept { return upper_; }

  std::size_t pair_index(int i, int j) const noexcept {
    // i < j
    const auto ii = static_cast<std::size_t>(i);
    const auto dd = static_cast<std::size_t>(d_);
    return ii * dd - ii * (ii + 1) / 2 + static_cast<std::size_t>(j - i - 1);
  }

  friend bool operator==(const NoisyMatrix&, const NoisyMatrix&) = default;

 private:
  int d_;
  std::vector<double> upper_;
};

enum class ModelKind { Submatrix, Sbm };

struct GaussianNoise {
  double sigma = 1.0;  // sigma == 0 is the noiseless mode
};
struct RademacherNoise {
  double nu = 1.0;  // entries are exactly +nu or -nu
};
using Noise = std::variant<GaussianNoise, RademacherNoise>;

struct ModelParams {
  ModelKind kind = ModelKind::Submatrix;
  int d = 2;
  int s_star = 2;
  double beta_star = 0.0;
  Noise noise = GaussianNoise{};  // Submatrix only
  double beta_tilde = 0.0;        // Sbm only
  std::uint64_t seed = 0;
};

/// Throws InvalidParams when any documented constraint is violated.
void validate(const ModelParams& params);

struct PlantedInstance {
  NoisyMatrix matrix;
  std::vector<int> support;  // sorted, |support| == s_star
  ModelParams params;
};

/// Entrywise mean: beta* on support pairs; 0 (Submatrix) or beta~* (Sbm)
/// elsewhere.
NoisyMatrix mean_matrix(const ModelParams& params, std::span<const int> support);

PlantedInstance gen_submatrix(const ModelParams& params);
PlantedInstance gen_sbm(const ModelParams& params);

/// Dispatches on params.kind.
PlantedInstance generate(const ModelParams& params);

/// Uniform s-subset of {0..d-1} by a seeded Fisher-Yates prefix; sorted.
std::vector<int> sample_support(int d, int s, Rng& rng);

}  // namespace sosgap
