#pragma once

// Data-parallel inner loops. Every kernel has a serial counterpart in
// covnet::kernels::reference used by the tests and the benchmark.
//
// Work is split into fixed-size column (or row) chunks independent of the
// thread count, so results are bit-identical however many threads run.

#include "covnet/numcore.hpp"

#include <span>
#include <vector>

namespace covnet::kernels {

/// Column chunk width used by the batched filter kernels.
inline constexpr Index kChunkColumns = 64;

/// Centered second moment (1/n) Σ (x_i − x̄)(x_i − x̄)ᵀ over the rows of
/// `samples` (n × m). Returns an exactly symmetric m × m matrix.
Matrix covariance(const Matrix& samples);

/// Σ_k taps[k] · shiftᵏ · signals, accumulated from iterated products
/// z₀ = X, z_{k+1} = S z_k. `signals` is m × B (one signal per column).
Matrix polynomial_filter(const Matrix& shift, std::span<const double> taps,
                         const Matrix& signals);

/// Krylov block {Sᵏ X : k < count}; element 0 is X itself.
std::vector<Matrix> krylov(const Matrix& shift, const Matrix& signals, int count);

/// K_ij = exp(−γ ‖a_i − b_j‖²) between the rows of `a` and `b`.
Matrix rbf_gram(const Matrix& a, const Matrix& b, double gamma);

/// Number of OpenMP threads kernels will use.
int thread_count();

/// Applies the COVNET_THREADS environment cap, if set, to the OpenMP runtime.
void apply_thread_limit_from_env();

namespace reference {

Matrix covariance(const Matrix& samples);
Matrix polynomial_filter(const Matrix& shift, std::span<const double> taps,
                         const Matrix& signals);
Matrix rbf_gram(const Matrix& a, const Matrix& b, double gamma);

}  // namespace reference

}  // namespace covnet::kernels
