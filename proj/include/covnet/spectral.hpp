#pragma once

// coVariance Fourier transform, polynomial covariance filters and the
// filterbank route to PCA scores.

#include "covnet/numcore.hpp"

#include <span>
#include <vector>

namespace covnet::spectral {

/// Polynomial coefficients h_0 … h_{T−1} of a covariance filter.
class FilterTaps {
 public:
  explicit FilterTaps(std::vector<double> taps);

  std::span<const double> values() const { return taps_; }
  std::size_t size() const { return taps_.size(); }
  double operator[](std::size_t k) const { return taps_[k]; }

  /// Throws when more than m + 1 taps are bound to an m-dimensional operator.
  void check_bindable(Index dim) const;

 private:
  std::vector<double> taps_;
};

struct SpectralResponse {
  Vector eigenvalue_grid;
  Vector response_values;
};

/// Uᵀx: the projection of x on the eigenbasis, entry i pairs with eigenvalue i.
Vector vft(const EigenSystem& eigen, const Vector& x);

/// U·coeffs.
Vector inverse_vft(const EigenSystem& eigen, const Vector& coeffs);

/// Σ_k h_k Ĉᵏ x by iterated matrix-vector products; Ĉᵏ is never formed.
Vector apply_filter(const CovarianceModel& cov, const FilterTaps& taps, const Vector& x);

/// h(λ) = Σ_k h_k λᵏ, Horner evaluation.
double frequency_response(const FilterTaps& taps, double lambda);

SpectralResponse frequency_response(const FilterTaps& taps, const Vector& grid);

/// U diag(gains) Uᵀ x.
Vector spectral_apply(const EigenSystem& eigen, const Vector& gains, const Vector& x);

/// Eigenbasis plus one narrowband gain per eigenvalue. Requires eigenvalues
/// separated by at least kMinFilterbankGap.
class PcaFilterbank {
 public:
  static constexpr double kMinFilterbankGap = 1e-6;

  PcaFilterbank(EigenSystem eigen, Vector gains);
  /// Unit gains.
  explicit PcaFilterbank(EigenSystem eigen);

  const EigenSystem& eigen() const { return eigen_; }
  const Vector& gains() const { return gains_; }

 private:
  EigenSystem eigen_;
  Vector gains_;
};

/// [y]_i = u_iᵀ H_i(Ĉ) x where H_i passes only eigenvalue w_i with gain η_i.
/// Each narrowband filter is applied in the spectral domain.
Vector pca_scores_via_filterbank(const PcaFilterbank& bank, const Vector& x);

/// H(Ĉ) = Σ_k h_k Ĉᵏ as an explicit symmetric matrix.
Matrix filter_matrix(const CovarianceModel& cov, const FilterTaps& taps);
Matrix filter_matrix(const Matrix& shift, const FilterTaps& taps);

/// Largest |h(λ)| over `eigenvalues`.
double max_response(const FilterTaps& taps, const Vector& eigenvalues);

/// Taps divided by max |h(λ)| over `eigenvalues`, so the rescaled response
/// is bounded by 1 there. Zero responses are returned unchanged.
FilterTaps normalize_response(const FilterTaps& taps, const Vector& eigenvalues);

}  // namespace covnet::spectral
