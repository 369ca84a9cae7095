#include "covnet/numcore.hpp"

#include "covnet/error.hpp"
#include "covnet/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <mutex>

namespace covnet {

void Dataset::validate() const {
  require(features.rows() >= 1 && features.cols() >= 1, ErrorCode::invalid_argument,
          "dataset is empty");
  require(features.allFinite(), ErrorCode::non_finite, "dataset features contain non-finite values");
  if (targets) {
    require(targets->size() == features.rows(), ErrorCode::dimension_mismatch,
            "target count " + std::to_string(targets->size()) + " != sample count " +
                std::to_string(features.rows()));
    require(targets->allFinite(), ErrorCode::non_finite, "dataset targets contain non-finite values");
  }
}

Dataset Dataset::select(std::span<const Index> rows) const {
  Dataset out;
  out.features.resize(static_cast<Index>(rows.size()), features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.features.row(i) = features.row(rows[i]);
  if (targets) {
    Vector t(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) t[i] = (*targets)[rows[i]];
    out.targets = std::move(t);
  }
  out.feature_names = feature_names;
  return out;
}

Dataset Dataset::head(Index count) const {
  require(count >= 0 && count <= samples(), ErrorCode::invalid_argument, "head: count out of range");
  Dataset out;
  out.features = features.topRows(count);
  if (targets) out.targets = targets->head(count);
  out.feature_names = feature_names;
  return out;
}

struct CovarianceModel::Cache {
  std::once_flag once;
  EigenSystem eigen;
};

void check_symmetric(const Matrix& matrix, const char* context) {
  require(matrix.rows() == matrix.cols(), ErrorCode::dimension_mismatch,
          std::string(context) + ": matrix is not square");
  require(matrix.allFinite(), ErrorCode::non_finite, std::string(context) + ": non-finite entries");
  const double scale = matrix.cwiseAbs().maxCoeff();
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  require(asym <= kSymmetryTolerance * scale, ErrorCode::not_symmetric,
          std::string(context) + ": matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
}

CovarianceModel::CovarianceModel(const Matrix& matrix) : cache_(std::make_shared<Cache>()) {
  require(matrix.rows() >= 1, ErrorCode::invalid_argument, "covariance: empty matrix");
  check_symmetric(matrix, "covariance");
  matrix_ = 0.5 * (matrix + matrix.transpose());
}

const EigenSystem& CovarianceModel::eigen() const {
  std::call_once(cache_->once, [this] {
    EigenSystem es = sym_eigendecomposition(matrix_);
    const double top = es.values[0];
    const double bottom = es.values[es.dim() - 1];
    require(bottom >= -1e-8 * std::max(top, 0.0), ErrorCode::numerical,
            "covariance is not positive semidefinite (smallest eigenvalue " + std::to_string(bottom) + ")");
    cache_->eigen = std::move(es);
  });
  return cache_->eigen;
}

CovarianceModel CovarianceModel::spectrally_normalized() const {
  const double top = eigen().values[0];
  if (top <= 0.0) return *this;
  return CovarianceModel(matrix_ / top);
}

CovarianceModel sample_covariance(const Matrix& samples) {
  require(samples.rows() >= 1 && samples.cols() >= 1, ErrorCode::invalid_argument,
          "sample_covariance: empty dataset");
  require(samples.allFinite(), ErrorCode::non_finite, "sample_covariance: non-finite entries");
  return CovarianceModel(kernels::covariance(samples));
}

CovarianceModel sample_covariance(const Dataset& data) {
  require(data.samples() >= 1 && data.dim() >= 1, ErrorCode::invalid_argument,
          "sample_covariance: empty dataset");
  return sample_covariance(data.features);
}

Vector canonical_sign(const Vector& v) {
  const double peak = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  require(peak > 0.0, ErrorCode::invalid_argument, "canonical_sign: zero vector");
  // Magnitudes within a relative 1e-12 of the peak count as tied, so that
  // solver round-off cannot flip the choice between equal entries.
  Index best = 0;
  while (std::abs(v[best]) < peak * (1.0 - 1e-12)) ++best;
  return v[best] < 0.0 ? Vector(-v) : v;
}

EigenSystem sym_eigendecomposition(const Matrix& matrix) {
  require(matrix.rows() >= 1, ErrorCode::invalid_argument, "eigendecomposition: empty matrix");
  check_symmetric(matrix, "eigendecomposition");
  const Matrix sym = 0.5 * (matrix + matrix.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::ComputeEigenvectors);
  require(solver.info() == Eigen::Success, ErrorCode::convergence,
          "eigendecomposition did not converge");

  const Index m = sym.rows();
  EigenSystem out;
  out.values.resize(m);
  out.vectors.resize(m, m);
  // Eigen returns ascending order.
  for (Index i = 0; i < m; ++i) {
    out.values[i] = solver.eigenvalues()[m - 1 - i];
    out.vectors.col(i) = canonical_sign(solver.eigenvectors().col(m - 1 - i));
  }
  return out;
}

double operator_norm_sym(const Matrix& matrix) {
  check_symmetric(matrix, "operator_norm_sym");
  if (matrix.isZero(0.0)) return 0.0;
  const Matrix sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorCode::convergence, "operator_norm_sym did not converge");
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

double covariance_error_norm(const CovarianceModel& sample, const CovarianceModel& ensemble) {
  require(sample.dim() == ensemble.dim(), ErrorCode::dimension_mismatch,
          "covariance_error_norm: dimension mismatch");
  return operator_norm_sym(sample.matrix() - ensemble.matrix());
}

double min_eigengap(const Vector& values) {
  double gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i + 1 < values.size(); ++i) gap = std::min(gap, std::abs(values[i] - values[i + 1]));
  return gap;
}

}  // namespace covnet
