#include "covnet/baseline.hpp"
#include "covnet/datagen.hpp"
#include "covnet/error.hpp"
#include "covnet/kernels.hpp"

#include "../support/helpers.hpp"

#include <doctest.h>

using namespace covnet;
using namespace covnet::baseline;
using testing::gaussian;
using testing::max_abs;

namespace {

Dataset with_targets(Matrix x, Vector y) {
  Dataset d;
  d.features = std::move(x);
  d.targets = std::move(y);
  return d;
}

// Features whose covariance has a clearly dominant first direction.
Dataset anisotropic(Index n, Index m, std::uint64_t seed) {
  Matrix x = gaussian(n, m, seed);
  for (Index j = 0; j < m; ++j) x.col(j) *= std::pow(0.7, static_cast<double>(j));
  return with_targets(x, Vector::Zero(n));
}

}  // namespace

TEST_CASE("top-k PCA transform") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = 1;
  const auto e = sym_eigendecomposition(d);
  Vector x(2);
  x << 5, 7;
  const Vector one = pca_transform_topk(e, x, 1);
  REQUIRE(one.size() == 1);
  CHECK(one(0) == 5.0);

  const auto r = sym_eigendecomposition(testing::random_psd(12, 3));
  const Vector z = testing::gaussian_vec(12, 4);
  const Vector full = r.vectors.transpose() * z;
  CHECK(max_abs(pca_transform_topk(r, z, 12) - full) <= 1e-12);
  CHECK(max_abs(pca_transform_topk(r, z, 5) - full.head(5)) <= 1e-12);
  CHECK(std::abs(full.norm() - z.norm()) <= 1e-10);
  CHECK_THROWS_AS(pca_transform_topk(r, z, 0), Error);
  CHECK_THROWS_AS(pca_transform_topk(r, z, 13), Error);
}

TEST_CASE("PCA-LR fits a target linear in the first score") {
  Dataset d = anisotropic(80, 6, 1);
  const auto cov = sample_covariance(d);
  const auto& e = cov.eigen();
  d.targets = 3.0 * pca_scores(e, d.features, 1).col(0) + Vector::Constant(80, 1.5);
  const auto reg = fit_pca_linear(d, e, 1);
  const Vector pred = reg.predict(d.features);
  CHECK((pred - *d.targets).squaredNorm() / 80.0 <= 1e-10);
}

TEST_CASE("PCA-LR on constant targets") {
  Dataset d = anisotropic(40, 5, 2);
  d.targets = Vector::Constant(40, 4.25);
  const auto reg = fit_pca_linear(d, sample_covariance(d).eigen(), 3);
  const auto& lin = std::get<LinearFit>(reg.regressor);
  CHECK(lin.intercept == doctest::Approx(4.25).epsilon(1e-12));
  CHECK(lin.weights.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("PCA-LR matches a least-squares oracle") {
  Dataset d = anisotropic(60, 7, 3);
  d.targets = testing::gaussian_vec(60, 4) + d.features.col(0) * 2.0;
  const auto e = sample_covariance(d).eigen();
  const Index c = 4;
  const auto reg = fit_pca_linear(d, e, c);
  const Matrix s = pca_scores(e, d.features, c);
  const oracle::Vec beta = oracle::least_squares(testing::to_mat(s), testing::to_vec(*d.targets));
  const auto& lin = std::get<LinearFit>(reg.regressor);
  CHECK(lin.intercept == doctest::Approx(beta[0]).epsilon(1e-8));
  for (Index j = 0; j < c; ++j) CHECK(lin.weights(j) == doctest::Approx(beta[static_cast<std::size_t>(j + 1)]).epsilon(1e-8));
}

TEST_CASE("PCA-LR with all components equals OLS on raw features") {
  Dataset d = anisotropic(70, 6, 5);
  d.targets = testing::gaussian_vec(70, 6);
  const auto e = sample_covariance(d).eigen();
  const auto reg = fit_pca_linear(d, e, 6, 0.0);
  const oracle::Vec beta = oracle::least_squares(testing::to_mat(d.features), testing::to_vec(*d.targets));
  Vector expect = Vector::Constant(70, beta[0]);
  for (Index j = 0; j < 6; ++j) expect += beta[static_cast<std::size_t>(j + 1)] * d.features.col(j);
  CHECK(max_abs(reg.predict(d.features) - expect) <= 1e-8);
}

TEST_CASE("PCA-LR degrades to a minimum-norm solution on a degenerate design") {
  // Identical rows: every score column is constant after centering.
  Matrix x = Matrix::Ones(20, 3);
  Dataset d = with_targets(x, testing::gaussian_vec(20, 1));
  EigenSystem e = sym_eigendecomposition(Matrix::Identity(3, 3) + Matrix::Ones(3, 3) * 0.0);
  const auto reg = fit_pca_linear(d, e, 2, 0.0);
  const auto& lin = std::get<LinearFit>(reg.regressor);
  CHECK(lin.weights.allFinite());
  CHECK(lin.intercept == doctest::Approx(d.targets->mean()));
}

TEST_CASE("kernel ridge limits") {
  Dataset d = anisotropic(30, 4, 7);
  d.targets = testing::gaussian_vec(30, 8);
  const auto e = sample_covariance(d).eigen();
  const auto heavy = fit_pca_rbf(d, e, 3, 0.5, 1e6);
  const Vector p = heavy.predict(d.features);
  for (Index i = 0; i < 30; ++i) CHECK(std::abs(p(i) - d.targets->mean()) <= 0.01 * std::abs(d.targets->mean()) + 1e-3);
  const auto light = fit_pca_rbf(d, e, 3, 0.5, 1e-8);
  CHECK(max_abs(light.predict(d.features) - *d.targets) <= 1e-3);
  CHECK_THROWS_AS(fit_pca_rbf(d, e, 3, -1.0, 1.0), Error);
  CHECK_THROWS_AS(fit_pca_rbf(d, e, 3, 1.0, 0.0), Error);
}

TEST_CASE("kernel ridge matches a direct dual solve") {
  Dataset d = anisotropic(50, 5, 9);
  d.targets = testing::gaussian_vec(50, 10);
  const auto e = sample_covariance(d).eigen();
  const double gamma = 0.3, ridge = 0.7;
  const auto reg = fit_pca_rbf(d, e, 3, gamma, ridge);
  const Matrix s = pca_scores(e, d.features, 3);
  oracle::Mat k = oracle::zeros(50, 50);
  for (Index i = 0; i < 50; ++i)
    for (Index j = 0; j < 50; ++j)
      k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          std::exp(-gamma * (s.row(i) - s.row(j)).squaredNorm()) + (i == j ? ridge : 0.0);
  const double ybar = d.targets->mean();
  oracle::Vec rhs = testing::to_vec(*d.targets);
  for (auto& v : rhs) v -= ybar;
  const oracle::Vec alpha = oracle::solve(k, rhs);
  const Matrix xq = gaussian(5, 5, 11);
  const Matrix sq = pca_scores(e, xq, 3);
  const Vector got = reg.predict(xq);
  for (Index q = 0; q < 5; ++q) {
    double expect = ybar;
    for (Index i = 0; i < 50; ++i)
      expect += alpha[static_cast<std::size_t>(i)] * std::exp(-gamma * (sq.row(q) - s.row(i)).squaredNorm());
    CHECK(got(q) == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("default gamma") {
  Dataset d = anisotropic(40, 4, 12);
  const auto e = sample_covariance(d).eigen();
  const Matrix s = pca_scores(e, d.features, 2);
  const double mean = s.mean();
  const double var = (s.array() - mean).square().mean();
  CHECK(default_gamma(d, e, 2) == doctest::Approx(1.0 / (2.0 * var)).epsilon(1e-12));
}

TEST_CASE("cross-validation finds an identifiable component count") {
  Dataset d = anisotropic(200, 12, 13);
  const auto e = sample_covariance(d).eigen();
  d.targets = 2.0 * pca_scores(e, d.features, 1).col(0) + 0.01 * testing::gaussian_vec(200, 14);
  CvOptions opt;
  opt.seed = 3;
  const std::vector<Index> cands{1, 5, 10};
  CHECK(cv_select_components(d, e, cands, Kernel::linear, opt).selected == 1);
}

TEST_CASE("cross-validation ties go to the smaller count") {
  Dataset d = anisotropic(50, 6, 15);
  d.targets = Vector::Constant(50, 2.0);
  const auto e = sample_covariance(d).eigen();
  const std::vector<Index> cands{4, 2, 6};
  const auto r = cv_select_components(d, e, cands, Kernel::linear, {});
  CHECK(r.selected == 2);
  Dataset tiny = anisotropic(8, 3, 1);
  tiny.targets = Vector::Ones(8);
  CHECK_THROWS_AS(cv_select_components(tiny, sample_covariance(tiny).eigen(), cands, Kernel::linear, {}), Error);
}

TEST_CASE("cross-validation is reproducible on Friedman-1") {
  const Dataset d = datagen::gen_friedman1(150, 10, 1.0, 4);
  const auto e = sample_covariance(d).eigen();
  const auto cands = default_candidates(10, 150);
  CvOptions opt;
  opt.seed = 9;
  const auto a = cv_select_components(d, e, cands, Kernel::linear, opt);
  const auto b = cv_select_components(d, e, cands, Kernel::linear, opt);
  CHECK(a.selected == b.selected);
  CHECK(a.mean_mse == b.mean_mse);
  const auto r1 = cv_select_components(d, e, cands, Kernel::rbf, opt);
  const auto r2 = cv_select_components(d, e, cands, Kernel::rbf, opt);
  CHECK(r1.mean_mse == r2.mean_mse);
}

TEST_CASE("default candidate grid") {
  CHECK(default_candidates(100, 900) == std::vector<Index>{1, 2, 5, 10, 20, 50, 100});
  CHECK(default_candidates(8, 5) == std::vector<Index>{1, 2, 4, 5});
  CHECK(default_candidates(3, 100) == std::vector<Index>{1, 2, 3});
}

TEST_CASE("reprojection with the training basis is a no-op") {
  Dataset d = anisotropic(40, 5, 16);
  d.targets = testing::gaussian_vec(40, 17);
  const auto e = sample_covariance(d).eigen();
  const auto reg = fit_pca_linear(d, e, 3);
  CHECK(reproject_with(e, reg, d.features) == reg.predict(d.features));
}

TEST_CASE("a flipped eigenvector shifts the prediction by twice the score term") {
  Dataset d = anisotropic(40, 5, 18);
  d.targets = testing::gaussian_vec(40, 19);
  const auto e = sample_covariance(d).eigen();
  const auto reg = fit_pca_linear(d, e, 3);
  EigenSystem flipped = e;
  flipped.vectors.col(0) *= -1.0;
  const Vector x = d.features.row(3).transpose();
  const double w1 = std::get<LinearFit>(reg.regressor).weights(0);
  const double s1 = e.vectors.col(0).dot(x);
  const double before = reproject_with(e, reg, x);
  const double after = reproject_with(flipped, reg, x);
  CHECK(std::abs(before - after) == doctest::Approx(2.0 * std::abs(w1 * s1)).epsilon(1e-10));
  CHECK(reproject_with(flipped, reg, x, true) == doctest::Approx(before).epsilon(1e-12));
  CHECK_THROWS_AS(reproject_with(sym_eigendecomposition(Matrix::Identity(4, 4)), reg, x), Error);
}
