#pragma once

#include "covnet/numcore.hpp"
#include "covnet/rng.hpp"
#include "oracles.hpp"

namespace testing {

using covnet::Index;
using covnet::Matrix;
using covnet::Vector;

inline oracle::Mat to_mat(const Matrix& m) {
  oracle::Mat out = oracle::zeros(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

inline oracle::Vec to_vec(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline Matrix from_mat(const oracle::Mat& m) {
  Matrix out(static_cast<Index>(m.size()), static_cast<Index>(m[0].size()));
  for (Index i = 0; i < out.rows(); ++i)
    for (Index j = 0; j < out.cols(); ++j) out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return out;
}

inline Vector from_vec(const oracle::Vec& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())); }

inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  covnet::Rng rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

inline Vector gaussian_vec(Index n, std::uint64_t seed) { return gaussian(n, 1, seed).col(0); }

inline Matrix random_symmetric(Index m, std::uint64_t seed) {
  const Matrix g = gaussian(m, m, seed);
  return (g + g.transpose()) / 2.0;
}

/// G Gᵀ / m: PSD with (almost surely) distinct eigenvalues.
inline Matrix random_psd(Index m, std::uint64_t seed) {
  const Matrix g = gaussian(m, m, seed);
  return g * g.transpose() / static_cast<double>(m);
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing
