#pragma once

// Dense symmetric linear algebra and covariance estimation.

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative tolerance under which a matrix is treated as symmetric.
inline constexpr double kSymmetryTolerance = 1e-10;

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// (one per column). Every column satisfies canonical_sign().
struct EigenSystem {
  Vector values;
  Matrix vectors;

  Index dim() const { return values.size(); }
};

/// Samples-by-features data matrix with optional regression targets.
struct Dataset {
  Matrix features;
  std::optional<Vector> targets;
  std::vector<std::string> feature_names;

  Index samples() const { return features.rows(); }
  Index dim() const { return features.cols(); }
  bool has_targets() const { return targets.has_value(); }

  /// Throws when the dataset is empty, holds non-finite values or the target
  /// length disagrees with the sample count.
  void validate() const;

  /// Subset of rows in the given order.
  Dataset select(std::span<const Index> rows) const;
  /// First `count` rows.
  Dataset head(Index count) const;
};

/// Symmetric PSD matrix acting as the shift operator. The eigendecomposition
/// is computed at most once and shared between copies.
class CovarianceModel {
 public:
  /// Accepts matrices symmetric within kSymmetryTolerance (relative) and
  /// stores the symmetrized (A + Aᵀ)/2.
  explicit CovarianceModel(const Matrix& matrix);

  Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

  /// Lazily computed, thread-safe. Throws when the matrix is not PSD up to
  /// numerical noise (smallest eigenvalue < -1e-8 * largest).
  const EigenSystem& eigen() const;

  /// Same matrix divided by its largest eigenvalue (no-op for the zero matrix).
  CovarianceModel spectrally_normalized() const;

 private:
  struct Cache;
  Matrix matrix_;
  std::shared_ptr<Cache> cache_;
};

/// (1/n) Σ (x_i − x̄)(x_i − x̄)ᵀ over the rows of `data.features`. The
/// normalization is 1/n, not the unbiased 1/(n − 1).
CovarianceModel sample_covariance(const Dataset& data);

/// Same estimator on a raw samples-by-features matrix.
CovarianceModel sample_covariance(const Matrix& samples);

/// Descending eigenpairs of a symmetric matrix with sign-canonical columns.
EigenSystem sym_eigendecomposition(const Matrix& matrix);

/// Flips `v` so that its entry of largest magnitude is positive; ties go to
/// the lowest index (entries within a relative 1e-12 of the peak are tied).
Vector canonical_sign(const Vector& v);

/// max_i |λ_i| of a symmetric matrix.
double operator_norm_sym(const Matrix& matrix);

/// ‖Ĉ − C‖ in operator norm.
double covariance_error_norm(const CovarianceModel& sample, const CovarianceModel& ensemble);

/// Throws unless `matrix` is square and symmetric within kSymmetryTolerance.
void check_symmetric(const Matrix& matrix, const char* context);

/// Smallest gap between consecutive (descending) eigenvalues; +inf when m = 1.
double min_eigengap(const Vector& descending_values);

}  // namespace covnet
