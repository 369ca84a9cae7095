#include "covnet/experiments.hpp"

#include "covnet/error.hpp"
#include "covnet/parallel.hpp"
#include "covnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace covnet::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Metrics evaluate(const Vector& pred_train, const Vector& y_train, const Vector& pred_test, const Vector& y_test) {
  return {mae(pred_train, y_train), mae(pred_test, y_test), pearson_or_nan(pred_train, y_train),
          pearson_or_nan(pred_test, y_test)};
}

Index test_count(Index n, double fraction) {
  const auto n_test = static_cast<Index>(std::llround(fraction * static_cast<double>(n)));
  require(n_test >= 1 && n - n_test >= 2, ErrorCode::invalid_argument,
          "train/test split leaves an empty side (n = " + std::to_string(n) + ")");
  return n_test;
}

}  // namespace

double mae(const Vector& pred, const Vector& truth) {
  require(pred.size() == truth.size() && pred.size() >= 1, ErrorCode::dimension_mismatch,
          "mae: inputs must have equal nonzero length");
  return (pred - truth).cwiseAbs().sum() / static_cast<double>(pred.size());
}

double pearson(const Vector& pred, const Vector& truth) {
  require(pred.size() == truth.size() && pred.size() >= 2, ErrorCode::dimension_mismatch,
          "pearson: inputs must have equal length >= 2");
  const double n = static_cast<double>(pred.size());
  const double mp = pred.sum() / n;
  const double mt = truth.sum() / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (Index i = 0; i < pred.size(); ++i) {
    const double a = pred[i] - mp;
    const double b = truth[i] - mt;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  require(sxx > 0.0 && syy > 0.0, ErrorCode::numerical, "pearson: zero-variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_or_nan(const Vector& pred, const Vector& truth) {
  try {
    return pearson(pred, truth);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::numerical) return kNaN;
    throw;
  }
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    s.sem = s.sd / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::vnn: return "vnn";
    case Family::pca_lr: return "pca_lr";
    case Family::pca_rbf: return "pca_rbf";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "vnn") return Family::vnn;
  if (name == "pca_lr") return Family::pca_lr;
  if (name == "pca_rbf") return Family::pca_rbf;
  fail(ErrorCode::schema, "unknown model family '" + name + "'");
}

Summary grid_test_mae(const StabilityTrial& trial) {
  std::vector<double> v;
  for (const auto& m : trial.grid) v.push_back(m.mae_test);
  return summarize(v);
}

std::vector<Index> trial_ordering(Index samples, std::uint64_t seed, int trial) {
  const auto perm = Rng(derive_seed(seed, 1000 + static_cast<std::uint64_t>(trial))).permutation(samples);
  return {perm.begin(), perm.end()};
}

void StabilityRunSpec::validate(Index samples) const {
  require(trials >= 1, ErrorCode::invalid_argument, "stability: trials must be >= 1");
  require(nominal_n >= 2 && nominal_n <= samples, ErrorCode::invalid_argument,
          "stability: nominal_n must be in [2, n]");
  for (Index g : grid)
    require(g >= 2 && g <= samples, ErrorCode::invalid_argument,
            "stability: grid value " + std::to_string(g) + " outside [2, " + std::to_string(samples) + "]");
  require(test_fraction > 0.0 && test_fraction < 1.0, ErrorCode::invalid_argument,
          "stability: test_fraction must be in (0, 1)");
  if (family == Family::vnn)
    require(!architecture.empty(), ErrorCode::invalid_argument, "stability: VNN architecture is empty");
}

StabilityReport stability_experiment(const Dataset& data, const StabilityRunSpec& spec) {
  data.validate();
  require(data.has_targets(), ErrorCode::invalid_argument, "stability: dataset has no targets");
  const Index n = data.samples();
  spec.validate(n);
  const Index n_test = test_count(n, spec.test_fraction);
  const Index n_train = n - n_test;

  StabilityReport report;
  report.family = spec.family;
  report.grid = spec.grid;
  report.nominal_n = spec.nominal_n;
  report.seed = spec.seed;
  report.trials.resize(static_cast<std::size_t>(spec.trials));

  parallel_for(spec.trials, [&](long t) {
    const auto order = trial_ordering(n, spec.seed, static_cast<int>(t));
    const Dataset ordered = data.select(order);
    const Dataset train = ordered.head(n_train);
    Dataset test;
    test.features = ordered.features.bottomRows(n_test);
    test.targets = ordered.targets->tail(n_test);
    const Vector& y_train = *train.targets;
    const Vector& y_test = *test.targets;
    auto covariance_of_prefix = [&](Index count) { return sample_covariance(ordered.features.topRows(count)); };

    StabilityTrial& trial = report.trials[static_cast<std::size_t>(t)];
    const CovarianceModel nominal_cov = covariance_of_prefix(spec.nominal_n);

    if (spec.family == Family::vnn) {
      const auto init = vnn::init_model(1, spec.architecture, derive_seed(spec.seed, 2000 + t), spec.cov_scale);
      vnn::TrainConfig cfg = spec.train;
      cfg.seed = derive_seed(spec.seed, 3000 + t);
      const vnn::VnnModel model = vnn::train(init, nominal_cov, train, cfg).model;
      auto run = [&](const CovarianceModel& cov) {
        const auto bound = vnn::swap_covariance(model, cov);
        return evaluate(bound.predict(train.features), y_train, bound.predict(test.features), y_test);
      };
      trial.nominal = run(nominal_cov);
      for (Index g : spec.grid) trial.grid.push_back(run(covariance_of_prefix(g)));
      return;
    }

    const EigenSystem& eigen = nominal_cov.eigen();
    const auto candidates =
        spec.candidates.empty() ? baseline::default_candidates(data.dim(), n_train) : spec.candidates;
    baseline::CvOptions cv = spec.cv;
    cv.seed = derive_seed(spec.seed, 4000 + t);
    const auto kernel = spec.family == Family::pca_lr ? baseline::Kernel::linear : baseline::Kernel::rbf;
    const Index c = baseline::cv_select_components(train, eigen, candidates, kernel, cv).selected;
    trial.components = c;
    baseline::PcaRegressor reg;
    if (kernel == baseline::Kernel::linear) {
      reg = baseline::fit_pca_linear(train, eigen, c, cv.jitter);
    } else {
      const double gamma = cv.gamma > 0.0 ? cv.gamma : baseline::default_gamma(train, eigen, c);
      reg = baseline::fit_pca_rbf(train, eigen, c, gamma, cv.ridge);
    }
    auto run = [&](const EigenSystem& e) {
      return evaluate(baseline::reproject_with(e, reg, train.features, spec.align_eigenbasis), y_train,
                      baseline::reproject_with(e, reg, test.features, spec.align_eigenbasis), y_test);
    };
    trial.nominal = run(eigen);
    for (Index g : spec.grid) trial.grid.push_back(run(covariance_of_prefix(g).eigen()));
  });

  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    std::vector<double> a, b, c, d;
    for (const auto& t : report.trials) {
      a.push_back(t.grid[gi].mae_train);
      b.push_back(t.grid[gi].mae_test);
      c.push_back(t.grid[gi].pearson_train);
      d.push_back(t.grid[gi].pearson_test);
    }
    report.aggregates.push_back({spec.grid[gi], summarize(a), summarize(b), summarize(c), summarize(d)});
  }
  return report;
}

ScalingReport scaling_law_experiment(const datagen::EnsembleSpec& ensemble, const spectral::FilterTaps& taps,
                                     const std::vector<Index>& n_grid, int seeds, std::uint64_t seed) {
  require(seeds >= 1, ErrorCode::invalid_argument, "scaling: seeds must be >= 1");
  require(n_grid.size() >= 2, ErrorCode::invalid_argument, "scaling: n grid needs at least two points");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    require(n_grid[i] >= 2, ErrorCode::invalid_argument, "scaling: grid values must be >= 2");
    if (i > 0) require(n_grid[i] > n_grid[i - 1], ErrorCode::invalid_argument, "scaling: n grid must increase");
  }
  require(n_grid.back() >= 100 * n_grid.front(), ErrorCode::invalid_argument,
          "scaling: n grid must span at least two decades");

  const CovarianceModel c = ensemble.covariance();
  const double peak = spectral::max_response(taps, c.eigen().values);
  require(peak <= 1.0 + 1e-12, ErrorCode::invalid_argument,
          "scaling: filter response exceeds 1 on the ensemble spectrum (max " + std::to_string(peak) + ")");
  const Matrix h_ensemble = spectral::filter_matrix(c, taps);

  ScalingReport report;
  report.points.resize(n_grid.size());
  const long jobs = static_cast<long>(n_grid.size()) * seeds;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    report.points[i].n = n_grid[i];
    report.points[i].norms.assign(static_cast<std::size_t>(seeds), 0.0);
  }
  parallel_for(jobs, [&](long job) {
    const std::size_t i = static_cast<std::size_t>(job / seeds);
    const int s = static_cast<int>(job % seeds);
    const Index n = n_grid[i];
    const auto sample = datagen::gen_gaussian_ensemble(ensemble, n, derive_seed(derive_seed(seed, n), s));
    const CovarianceModel c_hat = sample_covariance(sample.data);
    report.points[i].norms[s] = operator_norm_sym(spectral::filter_matrix(c_hat, taps) - h_ensemble);
  });

  bool all_zero = true;
  for (auto& p : report.points) {
    p.median = median(p.norms);
    for (double v : p.norms) all_zero = all_zero && v == 0.0;
  }
  for (std::size_t i = 1; i < report.points.size(); ++i)
    if (report.points[i].median > report.points[i - 1].median) ++report.inversions;
  if (all_zero) {
    report.constant_zero = true;
    return report;
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double k = static_cast<double>(report.points.size());
  for (const auto& p : report.points) {
    require(p.median > 0.0, ErrorCode::numerical, "scaling: zero median norm at n = " + std::to_string(p.n));
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(p.median);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return report;
}

vnn::VnnModel rescale_responses(const vnn::VnnModel& model, const Vector& union_spectrum) {
  vnn::VnnModel out = model;
  for (auto& layer : out.layers) {
    const auto& s = layer.spec();
    for (int f = 0; f < s.f_out; ++f)
      for (int g = 0; g < s.f_in; ++g) {
        auto h = layer.filter(f, g);
        const spectral::FilterTaps taps(std::vector<double>(h.begin(), h.end()));
        const double peak = spectral::max_response(taps, union_spectrum);
        if (peak > 0.0)
          for (double& t : h) t /= peak;
      }
  }
  return out;
}

LipschitzReport lipschitz_check(const vnn::VnnModel& model, const CovarianceModel& cov_a,
                                const CovarianceModel& cov_b, const Matrix& x_batch) {
  model.validate();
  require(model.input_channels == 1, ErrorCode::invalid_argument, "lipschitz_check: model must take one input channel");
  require(cov_a.dim() == cov_b.dim() && x_batch.rows() == cov_a.dim(), ErrorCode::dimension_mismatch,
          "lipschitz_check: dimension mismatch");

  const Matrix shift_a = vnn::effective_shift(model, cov_a);
  const Matrix shift_b = vnn::effective_shift(model, cov_b);
  const Vector spec_a = sym_eigendecomposition(shift_a).values;
  const Vector spec_b = sym_eigendecomposition(shift_b).values;

  LipschitzReport report;
  report.layers = static_cast<int>(model.layers.size());
  report.features = model.max_channels();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    const auto& s = layer.spec();
    for (int f = 0; f < s.f_out; ++f)
      for (int g = 0; g < s.f_in; ++g) {
        const auto h = layer.filter(f, g);
        const spectral::FilterTaps taps(std::vector<double>(h.begin(), h.end()));
        const double peak = std::max(spectral::max_response(taps, spec_a), spectral::max_response(taps, spec_b));
        require(peak <= 1.0 + 1e-12, ErrorCode::invalid_argument,
                "lipschitz_check: filter (layer " + std::to_string(l) + ", f " + std::to_string(f) + ", g " +
                    std::to_string(g) + ") has |h(lambda)| = " + std::to_string(peak) + " > 1");
        report.alpha = std::max(report.alpha, operator_norm_sym(spectral::filter_matrix(shift_a, taps) -
                                                                spectral::filter_matrix(shift_b, taps)));
      }
  }

  const vnn::Channels input{x_batch};
  const auto out_a = vnn::forward(model, cov_a, input);
  const auto out_b = vnn::forward(model, cov_b, input);
  const double factor = report.layers * std::pow(static_cast<double>(report.features), report.layers - 1);

  report.pass = true;
  for (Index b = 0; b < x_batch.cols(); ++b) {
    LipschitzSample s;
    for (std::size_t f = 0; f < out_a.output().size(); ++f) {
      const double d = (out_a.output()[f].col(b) - out_b.output()[f].col(b)).norm();
      s.lhs = std::max(s.lhs, d);
      s.lhs_sum += d;
    }
    s.rhs = factor * report.alpha * x_batch.col(b).norm();
    s.readout_diff = std::abs(out_a.predictions[b] - out_b.predictions[b]);
    // Rounding slack only; the bound itself is not loosened.
    s.pass = s.lhs <= s.rhs * (1.0 + 1e-9);
    report.pass = report.pass && s.pass;
    report.samples.push_back(s);
  }
  return report;
}

void LipschitzSweep::validate() const {
  require(cases >= 1 && max_layers >= 1 && max_features >= 1 && taps >= 1 && batch >= 1,
          ErrorCode::invalid_argument, "lipschitz sweep: counts must be >= 1");
  require(min_dim >= 1 && max_dim >= min_dim && taps <= min_dim + 1, ErrorCode::invalid_argument,
          "lipschitz sweep: need 1 <= min_dim <= max_dim and taps <= min_dim + 1");
}

LipschitzCase make_lipschitz_case(const LipschitzSweep& sweep, int index) {
  sweep.validate();
  Rng rng(derive_seed(sweep.seed, static_cast<std::uint64_t>(index)));
  const int layers = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(sweep.max_layers)));
  const Index m = sweep.min_dim + static_cast<Index>(rng.below(static_cast<std::uint64_t>(sweep.max_dim - sweep.min_dim + 1)));
  std::vector<vnn::LayerShape> shapes;
  for (int l = 0; l < layers; ++l) {
    const int f = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(sweep.max_features)));
    const auto act = rng.uniform() < 0.5 ? vnn::Activation::relu : vnn::Activation::tanh;
    shapes.push_back({f, sweep.taps, act});
  }

  Matrix g(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) g(i, j) = rng.normal();
  const CovarianceModel cov_a(g * g.transpose() / static_cast<double>(m));

  // C_b: sample covariance of n draws from N(0, C_a).
  const Index n = 20 + static_cast<Index>(rng.below(480));
  Matrix z(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) z(i, j) = rng.normal();
  const Eigen::LLT<Matrix> llt(cov_a.matrix() + 1e-12 * Matrix::Identity(m, m));
  const CovarianceModel cov_b = sample_covariance(Matrix(z * llt.matrixL().transpose()));

  Vector spectra(2 * m);
  spectra << cov_a.eigen().values, cov_b.eigen().values;
  const auto raw = vnn::init_model(1, shapes, rng.below(~std::uint64_t{0}));
  Matrix x(m, sweep.batch);
  for (Index i = 0; i < m; ++i)
    for (Index b = 0; b < sweep.batch; ++b) x(i, b) = rng.normal();
  return {rescale_responses(raw, spectra), cov_a, cov_b, x};
}

std::vector<LipschitzReport> lipschitz_sweep(const LipschitzSweep& sweep) {
  sweep.validate();
  std::vector<LipschitzReport> out(static_cast<std::size_t>(sweep.cases));
  parallel_for(sweep.cases, [&](long i) {
    const auto c = make_lipschitz_case(sweep, static_cast<int>(i));
    out[static_cast<std::size_t>(i)] = lipschitz_check(c.model, c.cov_a, c.cov_b, c.x);
  });
  return out;
}

TransferReport transfer_experiment(const std::vector<Dataset>& resolutions, const TransferSpec& spec) {
  require(!resolutions.empty(), ErrorCode::invalid_argument, "transfer: no datasets");
  require(spec.trials >= 1, ErrorCode::invalid_argument, "transfer: trials must be >= 1");
  require(!spec.train_resolutions.empty() && !spec.eval_resolutions.empty(), ErrorCode::invalid_argument,
          "transfer: empty train or eval resolution list");
  require(!spec.architecture.empty(), ErrorCode::invalid_argument, "transfer: VNN architecture is empty");
  for (const auto& d : resolutions) {
    d.validate();
    require(d.has_targets(), ErrorCode::invalid_argument, "transfer: dataset has no targets");
    require(d.samples() == resolutions.front().samples() &&
                (*d.targets).cwiseEqual(*resolutions.front().targets).all(),
            ErrorCode::invalid_argument, "transfer: targets differ across resolutions");
  }
  for (auto i : spec.train_resolutions)
    require(i < resolutions.size(), ErrorCode::invalid_argument, "transfer: train resolution index out of range");
  for (auto i : spec.eval_resolutions)
    require(i < resolutions.size(), ErrorCode::invalid_argument, "transfer: eval resolution index out of range");

  const Index n = resolutions.front().samples();
  const Index n_test = test_count(n, spec.test_fraction);
  const Index n_train = n - n_test;
  const std::size_t n_tr = spec.train_resolutions.size();
  const std::size_t n_ev = spec.eval_resolutions.size();

  TransferReport report;
  for (auto i : spec.train_resolutions) report.train_dims.push_back(resolutions[i].dim());
  for (auto i : spec.eval_resolutions) report.eval_dims.push_back(resolutions[i].dim());
  report.cells.assign(n_tr, std::vector<TransferCell>(n_ev));
  for (auto& row : report.cells)
    for (auto& cell : row) cell.trials.resize(static_cast<std::size_t>(spec.trials));

  parallel_for(static_cast<long>(spec.trials * n_tr), [&](long job) {
    const int t = static_cast<int>(job / static_cast<long>(n_tr));
    const std::size_t ti = static_cast<std::size_t>(job % static_cast<long>(n_tr));
    const auto order = trial_ordering(n, spec.seed, t);
    auto split = [&](const Dataset& d, Dataset& train, Dataset& test) {
      const Dataset ordered = d.select(order);
      train = ordered.head(n_train);
      test.features = ordered.features.bottomRows(n_test);
      test.targets = ordered.targets->tail(n_test);
    };

    Dataset train, test;
    split(resolutions[spec.train_resolutions[ti]], train, test);
    const CovarianceModel train_cov = sample_covariance(train);
    const auto init = vnn::init_model(1, spec.architecture, derive_seed(spec.seed, 2000 + t), spec.cov_scale);
    vnn::TrainConfig cfg = spec.train;
    cfg.seed = derive_seed(spec.seed, 3000 + t);
    const vnn::VnnModel model = vnn::train(init, train_cov, train, cfg).model;

    for (std::size_t ei = 0; ei < n_ev; ++ei) {
      Dataset e_train, e_test;
      split(resolutions[spec.eval_resolutions[ei]], e_train, e_test);
      const auto bound = vnn::swap_covariance(model, sample_covariance(e_train));
      report.cells[ti][ei].trials[static_cast<std::size_t>(t)] =
          evaluate(bound.predict(e_train.features), *e_train.targets, bound.predict(e_test.features), *e_test.targets);
    }
  });

  for (auto& row : report.cells)
    for (auto& cell : row) {
      std::vector<double> m, r;
      for (const auto& met : cell.trials) {
        m.push_back(met.mae_test);
        r.push_back(met.pearson_test);
      }
      cell.mae_test = summarize(m);
      cell.pearson_test = summarize(r);
    }
  return report;
}

}  // namespace covnet::experiments
