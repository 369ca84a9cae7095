#include "covnet/spectral.hpp"

#include "covnet/error.hpp"
#include "covnet/kernels.hpp"

#include <cmath>

namespace covnet::spectral {

namespace {

void check_length(const EigenSystem& eigen, Index n, const char* what) {
  require(n == eigen.dim(), ErrorCode::dimension_mismatch,
          std::string(what) + ": length " + std::to_string(n) + " != dimension " + std::to_string(eigen.dim()));
}

}  // namespace

FilterTaps::FilterTaps(std::vector<double> taps) : taps_(std::move(taps)) {
  require(!taps_.empty(), ErrorCode::invalid_argument, "filter needs at least one tap");
  for (double t : taps_) require(std::isfinite(t), ErrorCode::non_finite, "filter taps must be finite");
}

void FilterTaps::check_bindable(Index dim) const {
  require(static_cast<Index>(taps_.size()) <= dim + 1, ErrorCode::invalid_argument,
          std::to_string(taps_.size()) + " taps exceed m + 1 = " + std::to_string(dim + 1));
}

Vector vft(const EigenSystem& eigen, const Vector& x) {
  check_length(eigen, x.size(), "vft");
  return eigen.vectors.transpose() * x;
}

Vector inverse_vft(const EigenSystem& eigen, const Vector& coeffs) {
  check_length(eigen, coeffs.size(), "inverse_vft");
  return eigen.vectors * coeffs;
}

Vector apply_filter(const CovarianceModel& cov, const FilterTaps& taps, const Vector& x) {
  require(x.size() == cov.dim(), ErrorCode::dimension_mismatch, "apply_filter: dimension mismatch");
  taps.check_bindable(cov.dim());
  return kernels::polynomial_filter(cov.matrix(), taps.values(), x);
}

double frequency_response(const FilterTaps& taps, double lambda) {
  double acc = 0.0;
  for (std::size_t k = taps.size(); k-- > 0;) acc = acc * lambda + taps[k];
  return acc;
}

SpectralResponse frequency_response(const FilterTaps& taps, const Vector& grid) {
  SpectralResponse out{grid, Vector(grid.size())};
  for (Index i = 0; i < grid.size(); ++i) out.response_values[i] = frequency_response(taps, grid[i]);
  return out;
}

Vector spectral_apply(const EigenSystem& eigen, const Vector& gains, const Vector& x) {
  check_length(eigen, gains.size(), "spectral_apply gains");
  check_length(eigen, x.size(), "spectral_apply");
  const Vector coeffs = eigen.vectors.transpose() * x;
  return eigen.vectors * gains.cwiseProduct(coeffs);
}

PcaFilterbank::PcaFilterbank(EigenSystem eigen, Vector gains)
    : eigen_(std::move(eigen)), gains_(std::move(gains)) {
  check_length(eigen_, gains_.size(), "filterbank gains");
  require(gains_.allFinite(), ErrorCode::non_finite, "filterbank gains must be finite");
  const double gap = min_eigengap(eigen_.values);
  require(gap >= kMinFilterbankGap, ErrorCode::numerical,
          "filterbank needs distinct eigenvalues (min gap " + std::to_string(gap) + " < 1e-6)");
}

PcaFilterbank::PcaFilterbank(EigenSystem eigen)
    : PcaFilterbank(eigen, Vector::Ones(eigen.dim())) {}

Vector pca_scores_via_filterbank(const PcaFilterbank& bank, const Vector& x) {
  const EigenSystem& eigen = bank.eigen();
  check_length(eigen, x.size(), "pca_scores_via_filterbank");
  const Index m = eigen.dim();
  Vector y(m);
  Vector narrowband = Vector::Zero(m);
  for (Index i = 0; i < m; ++i) {
    narrowband[i] = bank.gains()[i];
    const Vector filtered = spectral_apply(eigen, narrowband, x);
    y[i] = eigen.vectors.col(i).dot(filtered);
    narrowband[i] = 0.0;
  }
  return y;
}

Matrix filter_matrix(const Matrix& shift, const FilterTaps& taps) {
  require(shift.rows() == shift.cols(), ErrorCode::dimension_mismatch, "filter_matrix: shift not square");
  taps.check_bindable(shift.rows());
  const Index m = shift.rows();
  Matrix power = Matrix::Identity(m, m);
  Matrix h = taps[0] * power;
  for (std::size_t k = 1; k < taps.size(); ++k) {
    power = power * shift;
    h.noalias() += taps[k] * power;
  }
  return 0.5 * (h + h.transpose());
}

Matrix filter_matrix(const CovarianceModel& cov, const FilterTaps& taps) {
  return filter_matrix(cov.matrix(), taps);
}

double max_response(const FilterTaps& taps, const Vector& eigenvalues) {
  double best = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i)
    best = std::max(best, std::abs(frequency_response(taps, eigenvalues[i])));
  return best;
}

FilterTaps normalize_response(const FilterTaps& taps, const Vector& eigenvalues) {
  const double peak = max_response(taps, eigenvalues);
  if (peak == 0.0) return taps;
  std::vector<double> scaled(taps.values().begin(), taps.values().end());
  for (double& t : scaled) t /= peak;
  return FilterTaps(std::move(scaled));
}

}  // namespace covnet::spectral
