#pragma once

// Seeded synthetic datasets.

#include "covnet/numcore.hpp"

#include <cstdint>
#include <vector>

namespace covnet::datagen {

/// Ensemble C = V diag(spectrum) Vᵀ with V a seeded random rotation.
struct EnsembleSpec {
  Index dim = 0;
  Vector spectrum;  // descending, nonnegative
  std::uint64_t rotation_seed = 0;

  void validate() const;
  /// Realized ensemble covariance.
  CovarianceModel covariance() const;
};

/// λ_i = ratio^i, i = 0 … m−1.
Vector geometric_spectrum(Index dim, double ratio);

/// Regions × latent factors loading model whose block means give the
/// coarse resolutions.
struct MultiResSpec {
  Index fine_dim = 600;
  std::vector<Index> resolutions{40, 120, 200};
  Index regions = 20;
  Index latent_dim = 4;
  Index samples = 1000;
  double noise_sd = 1.0;
  double target_noise_sd = 0.1;
  /// Loadings are exactly constant within a region when true; otherwise a
  /// small per-feature jitter is added.
  bool block_constant = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct MultiResData {
  Dataset fine;                  // fine_dim features
  std::vector<Dataset> coarse;   // one per resolution, same order
  Matrix latent;                 // n × latent_dim
};

/// Noise-free Friedman-1 response of one feature vector (first 5 entries used).
double friedman1_response(const Vector& x);

/// y = 10 sin(π x₁x₂) + 20(x₃ − 0.5)² + 10x₄ + 5x₅ + noise, x ~ U[0,1]ᵐ.
Dataset gen_friedman1(Index n, Index m, double noise_sd, std::uint64_t seed);

struct LowRankSpec {
  Index samples = 1000;
  Index dim = 100;
  Index n_informative = 20;
  double effective_rank = 25.0;
  double tail_strength = 0.7;
  double noise_sd = 3.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Singular profile s_i = (1 − tail)·exp(−(i/r)²) + tail·exp(−0.1·i/r).
Vector lowrank_profile(Index count, double effective_rank, double tail_strength);

/// Features U diag(s) Vᵀ from two seeded orthonormal factors; targets a
/// linear combination (weights 100·U[0,1)) of the first n_informative
/// features plus Gaussian noise.
Dataset gen_lowrank_regression(const LowRankSpec& spec);

struct EnsembleSample {
  Dataset data;
  CovarianceModel ensemble;
};

/// x_i = C^{1/2} z_i with z_i standard normal.
EnsembleSample gen_gaussian_ensemble(const EnsembleSpec& spec, Index n, std::uint64_t seed);

/// Latent z per sample; fine features = region loadings · z + noise; each
/// coarse resolution takes block means of the fine features; the target is a
/// fixed function of z shared by every resolution.
MultiResData gen_multires(const MultiResSpec& spec);

/// Contiguous partition of `fine_dim` features into `blocks` groups:
/// block j = [⌊j·m_f/r⌋, ⌊(j+1)·m_f/r⌋).
std::vector<Index> block_bounds(Index fine_dim, Index blocks);

/// Block means of the columns of `fine`.
Matrix block_means(const Matrix& fine, Index blocks);

struct KurtosisReport {
  Vector k;          // per eigenvector, descending eigenvalue order
  Vector eigenvalues;
  double k_min = 0.0;
  double kappa = 0.0;
};

/// Monte-Carlo k_i = √(E[‖XXᵀv_i‖²] − λ_i²) for X ~ N(0, C), plus
/// k_min (over λ_i > 0) and κ = max k_i²/|λ_i − λ_j| over distinct pairs.
KurtosisReport kurtosis_factor(const CovarianceModel& ensemble, Index n_mc, std::uint64_t seed);

}  // namespace covnet::datagen
