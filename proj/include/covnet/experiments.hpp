#pragma once

// Experiment harnesses: covariance-perturbation stability, filter scaling
// law, VNN Lipschitz bound and cross-resolution transfer.

#include "covnet/baseline.hpp"
#include "covnet/datagen.hpp"
#include "covnet/numcore.hpp"
#include "covnet/spectral.hpp"
#include "covnet/vnn.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace covnet::experiments {

double mae(const Vector& pred, const Vector& truth);
/// Two-pass Pearson correlation; throws on zero variance.
double pearson(const Vector& pred, const Vector& truth);
/// Pearson, or NaN when either input has zero variance.
double pearson_or_nan(const Vector& pred, const Vector& truth);

struct Metrics {
  double mae_train = 0.0;
  double mae_test = 0.0;
  double pearson_train = 0.0;
  double pearson_test = 0.0;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;   // sample standard deviation
  double sem = 0.0;
  std::size_t count = 0;
};

Summary summarize(const std::vector<double>& values);

enum class Family { vnn, pca_lr, pca_rbf };
std::string to_string(Family f);
Family parse_family(const std::string& name);

/// Ordering, split and perturbation grid shared by every family.
struct StabilityRunSpec {
  Family family = Family::vnn;
  Index nominal_n = 900;
  std::vector<Index> grid;   // may be empty: nominal metrics only
  int trials = 20;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
  // vnn
  std::vector<vnn::LayerShape> architecture;
  vnn::CovScale cov_scale = vnn::CovScale::none;
  vnn::TrainConfig train;
  // pca_lr / pca_rbf
  std::vector<Index> candidates;  // empty: default grid
  baseline::CvOptions cv;
  bool align_eigenbasis = false;

  void validate(Index samples) const;
};

struct StabilityTrial {
  Metrics nominal;
  std::vector<Metrics> grid;   // same order as spec.grid
  Index components = 0;        // PCA families: selected c
};

struct GridAggregate {
  Index n_prime = 0;
  Summary mae_train, mae_test, pearson_train, pearson_test;
};

struct StabilityReport {
  Family family = Family::vnn;
  std::vector<Index> grid;
  Index nominal_n = 0;
  std::vector<StabilityTrial> trials;
  std::vector<GridAggregate> aggregates;
  std::uint64_t seed = 0;
};

/// Per trial: seeded ordering of all samples, 90/10 train/test split, nominal
/// model fitted with Ĉ from the first nominal_n ordered samples; for each n′
/// in the grid the model is re-evaluated with Ĉ from the first n′ samples.
StabilityReport stability_experiment(const Dataset& data, const StabilityRunSpec& spec);

/// Test-MAE statistics over the perturbation grid of one trial.
Summary grid_test_mae(const StabilityTrial& trial);

/// Seeded sample ordering used by trial `trial`.
std::vector<Index> trial_ordering(Index samples, std::uint64_t seed, int trial);

struct ScalingPoint {
  Index n = 0;
  std::vector<double> norms;  // one per seed
  double median = 0.0;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  std::optional<double> slope;   // empty in the constant-zero case
  bool constant_zero = false;
  int inversions = 0;            // increases of the median along n
};

/// ‖H(Ĉ_n) − H(C)‖ over seeds for each n and the least-squares slope of
/// log median norm against log n. Taps must satisfy max |h(λ_i(C))| ≤ 1.
ScalingReport scaling_law_experiment(const datagen::EnsembleSpec& ensemble,
                                     const spectral::FilterTaps& taps,
                                     const std::vector<Index>& n_grid, int seeds,
                                     std::uint64_t seed);

struct LipschitzSample {
  double lhs = 0.0;        // max over output channels of ‖ΔΦ_f‖
  double lhs_sum = 0.0;    // Σ over output channels of ‖ΔΦ_f‖
  double rhs = 0.0;        // L F^{L−1} α ‖x‖
  double readout_diff = 0.0;
  bool pass = false;
};

struct LipschitzReport {
  double alpha = 0.0;
  int layers = 0;
  int features = 0;
  std::vector<LipschitzSample> samples;
  bool pass = false;
};

/// Checks ‖Φ(x; C_a) − Φ(x; C_b)‖ ≤ L F^{L−1} α ‖x‖ per input column.
/// Throws when some filter has |h(λ)| > 1 on either spectrum.
LipschitzReport lipschitz_check(const vnn::VnnModel& model, const CovarianceModel& cov_a,
                                const CovarianceModel& cov_b, const Matrix& x_batch);

/// Divides each filter by its max |h(λ)| over the union of the spectra.
vnn::VnnModel rescale_responses(const vnn::VnnModel& model, const Vector& union_spectrum);

/// Seeded family of Lipschitz-check cases: random depth, widths, dimension
/// and activations; C_b is a finite-sample estimate of C_a; responses are
/// rescaled over both spectra.
struct LipschitzSweep {
  int cases = 50;
  int max_layers = 3;
  int max_features = 4;
  Index min_dim = 5;
  Index max_dim = 30;
  int taps = 3;
  int batch = 4;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LipschitzCase {
  vnn::VnnModel model;
  CovarianceModel cov_a;
  CovarianceModel cov_b;
  Matrix x;  // m × batch
};

LipschitzCase make_lipschitz_case(const LipschitzSweep& sweep, int index);
std::vector<LipschitzReport> lipschitz_sweep(const LipschitzSweep& sweep);

struct TransferSpec {
  std::vector<std::size_t> train_resolutions;  // indices into the dataset list
  std::vector<std::size_t> eval_resolutions;
  int trials = 10;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
  std::vector<vnn::LayerShape> architecture;
  vnn::CovScale cov_scale = vnn::CovScale::spectral;
  vnn::TrainConfig train;
};

struct TransferCell {
  std::vector<Metrics> trials;
  Summary mae_test, pearson_test;
};

struct TransferReport {
  std::vector<Index> train_dims;
  std::vector<Index> eval_dims;
  std::vector<std::vector<TransferCell>> cells;  // [train][eval]
};

/// Trains at each train resolution, then evaluates the test split at each
/// eval resolution by swapping in that resolution's training covariance.
TransferReport transfer_experiment(const std::vector<Dataset>& resolutions,
                                   const TransferSpec& spec);

}  // namespace covnet::experiments
