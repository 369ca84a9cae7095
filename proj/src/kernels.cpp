#include "covnet/kernels.hpp"

#include "covnet/error.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <string>

namespace covnet::kernels {

namespace {

Index chunk_count(Index cols) { return (cols + kChunkColumns - 1) / kChunkColumns; }

void check_filter_args(const Matrix& shift, std::span<const double> taps, const Matrix& signals) {
  require(shift.rows() == shift.cols(), ErrorCode::dimension_mismatch, "polynomial_filter: shift not square");
  require(signals.rows() == shift.rows(), ErrorCode::dimension_mismatch,
          "polynomial_filter: signal length " + std::to_string(signals.rows()) + " != operator dimension " +
              std::to_string(shift.rows()));
  require(!taps.empty(), ErrorCode::invalid_argument, "polynomial_filter: no taps");
}

Matrix centered(const Matrix& samples) {
  const Eigen::RowVectorXd mean = samples.colwise().sum() / static_cast<double>(samples.rows());
  return samples.rowwise() - mean;
}

}  // namespace

Matrix covariance(const Matrix& samples) {
  const Index n = samples.rows();
  const Index m = samples.cols();
  const Matrix xc = centered(samples);
  Matrix out(m, m);
  const double inv_n = 1.0 / static_cast<double>(n);
  // Columns of xc are contiguous; each (i, j) entry is one dot product.
#pragma omp parallel for schedule(dynamic, 4)
  for (Index j = 0; j < m; ++j) {
    const double* cj = xc.col(j).data();
    for (Index i = 0; i <= j; ++i) {
      const double* ci = xc.col(i).data();
      double acc = 0.0;
      for (Index s = 0; s < n; ++s) acc += ci[s] * cj[s];
      out(i, j) = acc * inv_n;
    }
  }
  for (Index j = 0; j < m; ++j)
    for (Index i = j + 1; i < m; ++i) out(i, j) = out(j, i);
  return out;
}

Matrix polynomial_filter(const Matrix& shift, std::span<const double> taps, const Matrix& signals) {
  check_filter_args(shift, taps, signals);
  const Index cols = signals.cols();
  Matrix out(signals.rows(), cols);
  const Index chunks = chunk_count(cols);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const Index start = c * kChunkColumns;
    const Index width = std::min(kChunkColumns, cols - start);
    Matrix z = signals.middleCols(start, width);
    Matrix acc = taps[0] * z;
    Matrix next(z.rows(), width);
    for (std::size_t k = 1; k < taps.size(); ++k) {
      next.noalias() = shift * z;
      z.swap(next);
      acc.noalias() += taps[k] * z;
    }
    out.middleCols(start, width) = acc;
  }
  return out;
}

std::vector<Matrix> krylov(const Matrix& shift, const Matrix& signals, int count) {
  require(count >= 1, ErrorCode::invalid_argument, "krylov: count must be >= 1");
  require(signals.rows() == shift.rows(), ErrorCode::dimension_mismatch, "krylov: dimension mismatch");
  std::vector<Matrix> out(static_cast<std::size_t>(count));
  out[0] = signals;
  const Index cols = signals.cols();
  for (int k = 1; k < count; ++k) out[k].resize(signals.rows(), cols);
  const Index chunks = chunk_count(cols);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const Index start = c * kChunkColumns;
    const Index width = std::min(kChunkColumns, cols - start);
    for (int k = 1; k < count; ++k)
      out[k].middleCols(start, width).noalias() = shift * out[k - 1].middleCols(start, width);
  }
  return out;
}

Matrix rbf_gram(const Matrix& a, const Matrix& b, double gamma) {
  require(a.cols() == b.cols(), ErrorCode::dimension_mismatch, "rbf_gram: dimension mismatch");
  Matrix out(a.rows(), b.rows());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.rows(); ++j) {
      double d2 = 0.0;
      for (Index k = 0; k < a.cols(); ++k) {
        const double d = a(i, k) - b(j, k);
        d2 += d * d;
      }
      out(i, j) = std::exp(-gamma * d2);
    }
  }
  return out;
}

int thread_count() { return omp_get_max_threads(); }

void apply_thread_limit_from_env() {
  const char* env = std::getenv("COVNET_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  require(end != nullptr && *end == '\0' && n >= 1, ErrorCode::invalid_argument,
          std::string("COVNET_THREADS must be a positive integer, got '") + env + "'");
  omp_set_num_threads(static_cast<int>(n));
}

namespace reference {

Matrix covariance(const Matrix& samples) {
  const Index n = samples.rows();
  const Index m = samples.cols();
  Vector mean = Vector::Zero(m);
  for (Index s = 0; s < n; ++s)
    for (Index j = 0; j < m; ++j) mean[j] += samples(s, j);
  mean /= static_cast<double>(n);
  Matrix out = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      double acc = 0.0;
      for (Index s = 0; s < n; ++s) acc += (samples(s, i) - mean[i]) * (samples(s, j) - mean[j]);
      out(i, j) = acc / static_cast<double>(n);
    }
  }
  return out;
}

Matrix polynomial_filter(const Matrix& shift, std::span<const double> taps, const Matrix& signals) {
  check_filter_args(shift, taps, signals);
  const Index m = shift.rows();
  Matrix out(m, signals.cols());
  for (Index b = 0; b < signals.cols(); ++b) {
    std::vector<double> z(signals.col(b).data(), signals.col(b).data() + m);
    std::vector<double> acc(m), next(m);
    for (Index i = 0; i < m; ++i) acc[i] = taps[0] * z[i];
    for (std::size_t k = 1; k < taps.size(); ++k) {
      for (Index i = 0; i < m; ++i) {
        double s = 0.0;
        for (Index j = 0; j < m; ++j) s += shift(i, j) * z[j];
        next[i] = s;
      }
      z.swap(next);
      for (Index i = 0; i < m; ++i) acc[i] += taps[k] * z[i];
    }
    for (Index i = 0; i < m; ++i) out(i, b) = acc[i];
  }
  return out;
}

Matrix rbf_gram(const Matrix& a, const Matrix& b, double gamma) {
  Matrix out(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.rows(); ++j) out(i, j) = std::exp(-gamma * (a.row(i) - b.row(j)).squaredNorm());
  return out;
}

}  // namespace reference

}  // namespace covnet::kernels
