#include "covnet/datagen.hpp"
#include "covnet/error.hpp"
#include "covnet/experiments.hpp"

#include "../support/helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace covnet;
using namespace covnet::experiments;

namespace {

double pearson_oracle(const Vector& a, const Vector& b) {
  long double n = a.size(), sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (Index i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    saa += (long double)a[i] * a[i];
    sbb += (long double)b[i] * b[i];
    sab += (long double)a[i] * b[i];
  }
  const long double cov = sab - sa * sb / n;
  return static_cast<double>(cov / std::sqrt((saa - sa * sa / n) * (sbb - sb * sb / n)));
}

vnn::TrainConfig quick_train() {
  vnn::TrainConfig t;
  t.epochs = 5;
  t.batch_size = 16;
  t.learning_rate = 0.01;
  return t;
}

StabilityRunSpec small_spec(Family f) {
  StabilityRunSpec s;
  s.family = f;
  s.nominal_n = 100;
  s.grid = {40, 70, 100};
  s.trials = 3;
  s.seed = 5;
  s.architecture = {{3, 2, vnn::Activation::relu}, {2, 2, vnn::Activation::relu}};
  s.train = quick_train();
  s.candidates = {1, 3, 5};
  s.cv.folds = 3;
  s.cv.repeats = 1;
  return s;
}

bool same(const Metrics& a, const Metrics& b) {
  return a.mae_train == b.mae_train && a.mae_test == b.mae_test && a.pearson_train == b.pearson_train &&
         a.pearson_test == b.pearson_test;
}

}  // namespace

TEST_CASE("mae and pearson") {
  Vector t(5);
  t << 1, 3, 2, 5, 4;
  CHECK(mae(t, t) == 0.0);
  CHECK(pearson(t, t) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(-t, t) == doctest::Approx(-1.0).epsilon(1e-15));
  Vector p(5);
  p << 2, 3, 2, 4, 4;
  CHECK(mae(p, t) == doctest::Approx(0.4));

  for (std::uint64_t s = 0; s < 20; ++s) {
    const Vector a = testing::gaussian_vec(50, s);
    const Vector b = a + testing::gaussian_vec(50, s + 100);
    CHECK(std::abs(pearson(a, b) - pearson_oracle(a, b)) <= 1e-12);
  }
  CHECK_THROWS_AS(pearson(Vector::Ones(4), t.head(4)), Error);
  CHECK(std::isnan(pearson_or_nan(Vector::Ones(4), t.head(4))));
  CHECK_THROWS_AS(mae(t, t.head(3)), Error);
}

TEST_CASE("summaries") {
  const Summary s = summarize({1, 2, 3, 4});
  CHECK(s.mean == 2.5);
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.sem == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(s.count == 4);
}

TEST_CASE("stability: the nominal grid point reproduces nominal metrics") {
  const Dataset d = datagen::gen_friedman1(140, 8, 1.0, 3);
  for (Family f : {Family::vnn, Family::pca_lr, Family::pca_rbf}) {
    CAPTURE(to_string(f));
    const auto r = stability_experiment(d, small_spec(f));
    REQUIRE(r.trials.size() == 3);
    REQUIRE(r.aggregates.size() == 3);
    for (const auto& t : r.trials) {
      CHECK(same(t.grid[2], t.nominal));
      CHECK(std::isfinite(t.nominal.mae_test));
    }
    CHECK(r.aggregates[0].mae_test.count == 3);
  }
}

TEST_CASE("stability: covariance-free model is constant across the grid") {
  const Dataset d = datagen::gen_friedman1(140, 8, 1.0, 4);
  auto spec = small_spec(Family::vnn);
  spec.architecture = {{1, 1, vnn::Activation::identity}};
  const auto r = stability_experiment(d, spec);
  for (const auto& t : r.trials)
    for (const auto& g : t.grid) CHECK(same(g, t.nominal));
}

TEST_CASE("stability: reproducible and validated") {
  const Dataset d = datagen::gen_friedman1(140, 8, 1.0, 3);
  const auto spec = small_spec(Family::pca_lr);
  const auto a = stability_experiment(d, spec);
  const auto b = stability_experiment(d, spec);
  for (std::size_t t = 0; t < a.trials.size(); ++t)
    for (std::size_t g = 0; g < a.grid.size(); ++g) CHECK(same(a.trials[t].grid[g], b.trials[t].grid[g]));

  auto bad = spec;
  bad.grid = {141};
  CHECK_THROWS_AS(stability_experiment(d, bad), Error);
  bad = spec;
  bad.nominal_n = 200;
  CHECK_THROWS_AS(stability_experiment(d, bad), Error);
}

TEST_CASE("grid test-MAE summary") {
  StabilityTrial t;
  t.grid.resize(3);
  t.grid[0].mae_test = 1;
  t.grid[1].mae_test = 2;
  t.grid[2].mae_test = 3;
  const Summary s = grid_test_mae(t);
  CHECK(s.mean == 2.0);
  CHECK(s.sd == 1.0);
}

TEST_CASE("scaling: constant filter") {
  datagen::EnsembleSpec e{6, datagen::geometric_spectrum(6, 0.7), 1};
  const auto r = scaling_law_experiment(e, spectral::FilterTaps({0.5}), {50, 500, 5000}, 3, 0);
  CHECK(r.constant_zero);
  CHECK_FALSE(r.slope.has_value());
  for (const auto& p : r.points)
    for (double v : p.norms) CHECK(v == 0.0);
}

TEST_CASE("scaling: identity filter measures the covariance error") {
  datagen::EnsembleSpec e{6, datagen::geometric_spectrum(6, 0.7), 1};
  const std::vector<Index> grid{50, 500, 5000};
  const auto r = scaling_law_experiment(e, spectral::FilterTaps({0.0, 1.0}), grid, 4, 9);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int s = 0; s < 4; ++s) {
      const auto sample = datagen::gen_gaussian_ensemble(e, grid[i], derive_seed(derive_seed(9, grid[i]), s));
      const double expect = covariance_error_norm(sample_covariance(sample.data), sample.ensemble);
      CHECK(std::abs(r.points[i].norms[s] - expect) <= 1e-12);
    }
  REQUIRE(r.slope.has_value());
  CHECK(*r.slope < 0.0);
}

TEST_CASE("scaling: argument checks") {
  datagen::EnsembleSpec e{4, datagen::geometric_spectrum(4, 0.7), 1};
  CHECK_THROWS_AS(scaling_law_experiment(e, spectral::FilterTaps({0.0, 1.0}), {100, 200}, 3, 0), Error);   // one decade short
  CHECK_THROWS_AS(scaling_law_experiment(e, spectral::FilterTaps({0.0, 1.0}), {100}, 3, 0), Error);
  CHECK_THROWS_AS(scaling_law_experiment(e, spectral::FilterTaps({0.0, 2.0}), {10, 1000}, 3, 0), Error);  // |h| > 1
}

TEST_CASE("lipschitz: equal covariances and covariance-free filters") {
  LipschitzSweep sweep;
  sweep.seed = 3;
  const auto c = make_lipschitz_case(sweep, 0);
  const auto same_cov = lipschitz_check(c.model, c.cov_a, c.cov_a, c.x);
  CHECK(same_cov.alpha == 0.0);
  for (const auto& s : same_cov.samples) {
    CHECK(s.lhs == 0.0);
    CHECK(s.rhs == 0.0);
    CHECK(s.pass);
  }

  vnn::VnnModel identity;
  identity.layers.emplace_back(vnn::LayerSpec{1, 1, 1, vnn::Activation::relu}, std::vector<double>{1.0});
  const auto r = lipschitz_check(identity, c.cov_a, c.cov_b, c.x);
  CHECK(r.pass);
  for (const auto& s : r.samples) CHECK(s.lhs == 0.0);
}

TEST_CASE("lipschitz: hypothesis violation is reported") {
  LipschitzSweep sweep;
  const auto c = make_lipschitz_case(sweep, 1);
  vnn::VnnModel big = c.model;
  for (double& t : big.layers[0].taps()) t *= 10.0;
  CHECK_THROWS_AS(lipschitz_check(big, c.cov_a, c.cov_b, c.x), Error);
}

TEST_CASE("lipschitz: seeded sweep passes") {
  LipschitzSweep sweep;
  sweep.cases = 10;
  sweep.seed = 1;
  for (const auto& r : lipschitz_sweep(sweep)) {
    CHECK(r.pass);
    CHECK(r.layers <= 3);
    CHECK(r.features <= 4);
  }
}

TEST_CASE("transfer") {
  datagen::MultiResSpec ms;
  ms.fine_dim = 60;
  ms.resolutions = {12, 30};
  ms.regions = 6;
  ms.samples = 120;
  ms.seed = 1;
  const auto data = datagen::gen_multires(ms);
  const std::vector<Dataset> res{data.coarse[0], data.coarse[1]};

  TransferSpec spec;
  spec.trials = 2;
  spec.seed = 4;
  spec.architecture = {{3, 2, vnn::Activation::relu}};
  spec.train = quick_train();

  SUBCASE("diagonal cells equal native evaluation bitwise") {
    spec.train_resolutions = {0, 1};
    spec.eval_resolutions = {0, 1};
    const auto full = transfer_experiment(res, spec);
    REQUIRE(full.cells.size() == 2);
    CHECK(full.train_dims == std::vector<Index>{12, 30});
    for (std::size_t i = 0; i < 2; ++i) {
      auto native = spec;
      native.train_resolutions = {i};
      native.eval_resolutions = {i};
      const auto r = transfer_experiment(res, native);
      for (int t = 0; t < 2; ++t) CHECK(same(r.cells[0][0].trials[t], full.cells[i][i].trials[t]));
    }
  }
  SUBCASE("covariance-free model predicts identically at every resolution") {
    ms.noise_sd = 0.0;
    ms.block_constant = true;
    const auto clean = datagen::gen_multires(ms);
    spec.architecture = {{1, 1, vnn::Activation::identity}};
    spec.train_resolutions = {0};
    spec.eval_resolutions = {0, 1};
    const auto r = transfer_experiment({clean.coarse[0], clean.coarse[1]}, spec);
    for (int t = 0; t < 2; ++t)
      CHECK(r.cells[0][0].trials[t].mae_test == doctest::Approx(r.cells[0][1].trials[t].mae_test).epsilon(1e-12));
  }
  SUBCASE("target mismatch") {
    auto bad = res;
    (*bad[1].targets)[0] += 1.0;
    spec.train_resolutions = {0};
    spec.eval_resolutions = {1};
    CHECK_THROWS_AS(transfer_experiment(bad, spec), Error);
  }
}
