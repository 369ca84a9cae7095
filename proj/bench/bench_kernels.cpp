// Parallel kernels against their serial reference versions.

#include "covnet/kernels.hpp"
#include "covnet/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using covnet::Index;
using covnet::Matrix;

Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  covnet::Rng rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

void BM_Covariance(benchmark::State& state) {
  const Matrix x = gaussian(1000, state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(covnet::kernels::covariance(x));
}

void BM_CovarianceReference(benchmark::State& state) {
  const Matrix x = gaussian(1000, state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(covnet::kernels::reference::covariance(x));
}

void BM_PolynomialFilter(benchmark::State& state) {
  const Index m = state.range(0);
  const Matrix c = covnet::kernels::covariance(gaussian(2 * m, m, 2));
  const Matrix x = gaussian(m, 256, 3);
  const std::vector<double> taps{0.4, 0.3, 0.2, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(covnet::kernels::polynomial_filter(c, taps, x));
}

void BM_PolynomialFilterReference(benchmark::State& state) {
  const Index m = state.range(0);
  const Matrix c = covnet::kernels::covariance(gaussian(2 * m, m, 2));
  const Matrix x = gaussian(m, 256, 3);
  const std::vector<double> taps{0.4, 0.3, 0.2, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(covnet::kernels::reference::polynomial_filter(c, taps, x));
}

void BM_RbfGram(benchmark::State& state) {
  const Matrix a = gaussian(state.range(0), 20, 4);
  for (auto _ : state) benchmark::DoNotOptimize(covnet::kernels::rbf_gram(a, a, 0.05));
}

void BM_RbfGramReference(benchmark::State& state) {
  const Matrix a = gaussian(state.range(0), 20, 4);
  for (auto _ : state) benchmark::DoNotOptimize(covnet::kernels::reference::rbf_gram(a, a, 0.05));
}

}  // namespace

BENCHMARK(BM_Covariance)->Arg(50)->Arg(200);
BENCHMARK(BM_CovarianceReference)->Arg(50)->Arg(200);
BENCHMARK(BM_PolynomialFilter)->Arg(50)->Arg(200);
BENCHMARK(BM_PolynomialFilterReference)->Arg(50)->Arg(200);
BENCHMARK(BM_RbfGram)->Arg(200)->Arg(800);
BENCHMARK(BM_RbfGramReference)->Arg(200)->Arg(800);

BENCHMARK_MAIN();
