#include "covnet/error.hpp"
#include "covnet/spectral.hpp"

#include "../support/helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace covnet;
using namespace covnet::spectral;
using testing::gaussian;
using testing::gaussian_vec;
using testing::max_abs;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  std::copy(v.begin(), v.end(), out.data());
  return out;
}

Vector responses(const FilterTaps& taps, const Vector& values) {
  Vector g(values.size());
  for (Index i = 0; i < values.size(); ++i) g(i) = frequency_response(taps, values(i));
  return g;
}

}  // namespace

TEST_CASE("vft") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 1;
  const auto e = sym_eigendecomposition(d);
  CHECK(vft(e, vec({3, 4})) == vec({3, 4}));

  const auto r = sym_eigendecomposition(testing::random_psd(10, 4));
  for (Index i = 0; i < 10; ++i) CHECK(max_abs(vft(r, r.vectors.col(i)) - Vector::Unit(10, i)) <= 1e-12);

  const Vector x = gaussian_vec(10, 5);
  const oracle::Vec direct = oracle::matvec(oracle::transpose(testing::to_mat(r.vectors)), testing::to_vec(x));
  CHECK(max_abs(vft(r, x) - testing::from_vec(direct)) <= 1e-12);
  CHECK_THROWS_AS(vft(r, Vector::Ones(3)), Error);
}

TEST_CASE("inverse vft") {
  const auto e = sym_eigendecomposition(testing::random_psd(25, 6));
  CHECK(inverse_vft(e, Vector::Zero(25)) == Vector::Zero(25));
  const Vector x = gaussian_vec(25, 7);
  CHECK((inverse_vft(e, vft(e, x)) - x).norm() <= 1e-10);
  CHECK(max_abs(inverse_vft(e, Vector::Unit(25, 3)) - e.vectors.col(3)) <= 1e-15);
}

TEST_CASE("apply filter") {
  const CovarianceModel c(testing::random_psd(6, 1));
  const Vector x = gaussian_vec(6, 2);
  CHECK(apply_filter(c, FilterTaps({1.0}), x) == x);

  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  CHECK(apply_filter(CovarianceModel(a), FilterTaps({0.0, 1.0}), vec({1, 0})) == vec({2, 1}));

  const CovarianceModel big(testing::random_psd(30, 3));
  const FilterTaps taps({0.5, -0.2, 0.1, 0.05, -0.01});
  const Vector z = gaussian_vec(30, 4);
  const Vector via_spectrum = spectral_apply(big.eigen(), responses(taps, big.eigen().values), z);
  CHECK(max_abs(apply_filter(big, taps, z) - via_spectrum) <= 1e-9 * std::max(1.0, max_abs(via_spectrum)));
  CHECK_THROWS_AS(apply_filter(big, taps, Vector::Ones(5)), Error);
}

TEST_CASE("tap count is bounded by m + 1") {
  const CovarianceModel c(testing::random_psd(3, 1));
  CHECK_NOTHROW(apply_filter(c, FilterTaps({1, 1, 1, 1}), Vector::Ones(3)));
  CHECK_THROWS_AS(apply_filter(c, FilterTaps({1, 1, 1, 1, 1}), Vector::Ones(3)), Error);
  CHECK_THROWS_AS(FilterTaps({}), Error);
  CHECK_THROWS_AS(FilterTaps({1.0, std::nan("")}), Error);
}

TEST_CASE("frequency response") {
  CHECK(frequency_response(FilterTaps({1, 2}), 3.0) == 7.0);
  CHECK(frequency_response(FilterTaps({-2.5}), 123.0) == -2.5);
  CHECK(frequency_response(FilterTaps({0, 0, 1}), 4.0) == 16.0);
  const auto r = frequency_response(FilterTaps({1, 1}), vec({0, 1, 2}));
  CHECK(r.eigenvalue_grid == vec({0, 1, 2}));
  CHECK(r.response_values == vec({1, 2, 3}));
}

TEST_CASE("spectral apply") {
  const auto e = sym_eigendecomposition(testing::random_psd(12, 9));
  const Vector x = gaussian_vec(12, 10);
  CHECK(max_abs(spectral_apply(e, Vector::Ones(12), x) - x) <= 1e-12);
  const Vector proj = spectral_apply(e, Vector::Unit(12, 4), x);
  CHECK(max_abs(proj - e.vectors.col(4) * e.vectors.col(4).dot(x)) <= 1e-12);
  CHECK_THROWS_AS(spectral_apply(e, Vector::Ones(11), x), Error);
}

TEST_CASE("filterbank PCA scores") {
  const auto e = sym_eigendecomposition(testing::random_psd(15, 13));
  const Vector x = gaussian_vec(15, 14);
  CHECK(max_abs(pca_scores_via_filterbank(PcaFilterbank(e), x) - e.vectors.transpose() * x) <= 1e-10);
  CHECK(pca_scores_via_filterbank(PcaFilterbank(e, Vector::Zero(15)), x).cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_abs(pca_scores_via_filterbank(PcaFilterbank(e, Vector::Constant(15, 2.0)), x) -
                2.0 * e.vectors.transpose() * x) <= 1e-10);
  Vector gains = Vector::LinSpaced(15, -1.0, 3.0);
  const Vector y = pca_scores_via_filterbank(PcaFilterbank(e, gains), x);
  CHECK(max_abs(y - gains.cwiseProduct(e.vectors.transpose() * x)) <= 1e-10);
}

TEST_CASE("filterbank rejects repeated eigenvalues") {
  CHECK_THROWS_AS(PcaFilterbank(sym_eigendecomposition(Matrix::Identity(4, 4))), Error);
  CHECK_THROWS_AS(PcaFilterbank(sym_eigendecomposition(testing::random_psd(4, 1)), Vector::Ones(3)), Error);
}

TEST_CASE("filter matrix") {
  const CovarianceModel c(testing::random_psd(9, 21));
  CHECK(max_abs(filter_matrix(c, FilterTaps({1.0})) - Matrix::Identity(9, 9)) == 0.0);
  CHECK(max_abs(filter_matrix(c, FilterTaps({0.0, 1.0})) - c.matrix()) <= 1e-15);
  const FilterTaps taps({0.2, 0.7, -0.3, 0.1});
  const Matrix h = filter_matrix(c, taps);
  CHECK(max_abs(h - h.transpose()) <= 1e-10);
  const Vector x = gaussian_vec(9, 22);
  CHECK(max_abs(h * x - apply_filter(c, taps, x)) <= 1e-10);
}

TEST_CASE("spectral and vertex filtering agree on seeded cases") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Index m = 2 + static_cast<Index>(seed % 49);
    const CovarianceModel c(testing::random_psd(m, 100 + seed));
    covnet::Rng rng(200 + seed);
    std::vector<double> t(1 + rng.below(static_cast<std::uint64_t>(std::min<Index>(m + 1, 6))));
    for (auto& v : t) v = rng.uniform(-1.0, 1.0);
    const FilterTaps taps(t);
    const Vector x = gaussian_vec(m, 300 + seed);
    const Vector a = apply_filter(c, taps, x);
    const Vector b = spectral_apply(c.eigen(), responses(taps, c.eigen().values), x);
    CHECK((a - b).norm() <= 1e-8 * std::max(b.norm(), 1e-300));
  }
}

TEST_CASE("filters commute with feature permutations") {
  const Index m = 12;
  const CovarianceModel c(testing::random_psd(m, 31));
  const FilterTaps taps({0.4, 0.3, -0.2});
  const Vector x = gaussian_vec(m, 32);
  std::vector<long> perm_idx = covnet::Rng(33).permutation(m);
  Eigen::PermutationMatrix<Eigen::Dynamic> p(m);
  for (Index i = 0; i < m; ++i) p.indices()(i) = static_cast<int>(perm_idx[static_cast<std::size_t>(i)]);
  const Matrix pc = p * c.matrix() * p.transpose();
  const Vector lhs = apply_filter(CovarianceModel(pc), taps, p * x);
  const Vector rhs = p * apply_filter(c, taps, x);
  CHECK(max_abs(lhs - rhs) <= 1e-10);
}

TEST_CASE("response normalization") {
  const Vector lambdas = vec({3.0, 1.0, 0.5});
  const FilterTaps taps({1.0, 2.0});
  CHECK(max_response(taps, lambdas) == 7.0);
  const FilterTaps n = normalize_response(taps, lambdas);
  CHECK(max_response(n, lambdas) == doctest::Approx(1.0).epsilon(1e-15));
  const FilterTaps zero({0.0, 0.0});
  CHECK(normalize_response(zero, lambdas).values()[1] == 0.0);
}
