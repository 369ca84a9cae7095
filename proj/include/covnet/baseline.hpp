#pragma once

// PCA-regression baselines: linear least squares or RBF kernel ridge on the
// leading principal-component scores.

#include "covnet/numcore.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace covnet::baseline {

enum class Kernel { linear, rbf };

std::string to_string(Kernel k);
Kernel parse_kernel(std::string_view name);

struct LinearFit {
  double intercept = 0.0;
  Vector weights;  // length c
};

/// Kernel ridge on scores: f(s) = ȳ + Σ_i α_i exp(−γ‖s − s_i‖²).
struct RbfFit {
  double gamma = 1.0;
  double ridge = 1.0;
  double target_mean = 0.0;
  Vector dual;
  Matrix train_scores;  // n × c
};

struct PcaRegressor {
  EigenSystem eigen_basis;
  Index n_components = 1;
  std::variant<LinearFit, RbfFit> regressor;

  Kernel kernel() const;
  /// Predictions using the regressor's own eigenbasis.
  Vector predict(const Matrix& features) const;
};

/// First c entries of Uᵀx.
Vector pca_transform_topk(const EigenSystem& eigen, const Vector& x, Index c);

/// Top-c scores for every row of `features` (n × c).
Matrix pca_scores(const EigenSystem& eigen, const Matrix& features, Index c);

/// Least squares with intercept on top-c scores, solved through ridge-jittered
/// normal equations on centered scores.
PcaRegressor fit_pca_linear(const Dataset& data, const EigenSystem& eigen, Index c,
                            double jitter = 1e-10);

/// Kernel ridge regression on top-c scores with centered targets.
PcaRegressor fit_pca_rbf(const Dataset& data, const EigenSystem& eigen, Index c,
                         double gamma, double ridge);

/// γ = 1/(c·var(scores)) over all score entries.
double default_gamma(const Dataset& data, const EigenSystem& eigen, Index c);

struct CvOptions {
  int folds = 10;
  int repeats = 5;
  std::uint64_t seed = 0;
  double jitter = 1e-10;
  /// rbf only; non-positive gamma selects default_gamma per candidate.
  double gamma = 0.0;
  double ridge = 1.0;
};

struct CvResult {
  Index selected = 1;
  std::vector<Index> candidates;
  std::vector<double> mean_mse;
};

/// c minimizing the mean validation MSE over folds × repeats; ties go to the
/// smaller c. Candidates above m are dropped.
CvResult cv_select_components(const Dataset& data, const EigenSystem& eigen,
                              std::span<const Index> candidates, Kernel kernel,
                              const CvOptions& options);

/// {1, 2, 5, 10, 20, 50, min(m, n − 1)} clipped to [1, m], deduplicated.
std::vector<Index> default_candidates(Index dim, Index samples);

/// Same regressor, scores recomputed in `eigen_new`. With `align`, each new
/// eigenvector is first sign-matched to the regressor's basis column.
double reproject_with(const EigenSystem& eigen_new, const PcaRegressor& reg,
                      const Vector& x, bool align = false);

Vector reproject_with(const EigenSystem& eigen_new, const PcaRegressor& reg,
                      const Matrix& features, bool align = false);

}  // namespace covnet::baseline
