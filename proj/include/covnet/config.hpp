#pragma once

// JSON run configuration. Every object rejects keys it does not know and
// errors name the offending path (e.g. "train.learning_rte").

#include "covnet/baseline.hpp"
#include "covnet/datagen.hpp"
#include "covnet/experiments.hpp"
#include "covnet/vnn.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace covnet::config {

inline constexpr int kConfigSchemaVersion = 1;

struct DataConfig {
  std::string source = "csv";  // csv | friedman1 | lowrank | gaussian | multires
  // csv
  std::string path;
  std::string test_path;
  bool header = false;
  std::string target_col = "last";
  // generators
  Index samples = 1000;
  Index dim = 100;
  double noise_sd = 1.0;
  // lowrank
  Index n_informative = 20;
  double effective_rank = 25.0;
  double tail_strength = 0.7;
  // gaussian
  std::vector<double> spectrum;  // empty: geometric with `ratio`
  double ratio = 0.8;
  std::uint64_t rotation_seed = 1;
  // multires
  Index fine_dim = 600;
  std::vector<Index> resolutions{40, 120, 200};
  Index regions = 20;
  Index latent_dim = 4;
  double target_noise_sd = 0.1;
  bool block_constant = true;
  /// Divide every feature by the largest row norm so that ‖x‖ ≤ 1.
  bool rescale_unit_norm = false;
};

struct ModelConfig {
  int input_channels = 1;
  std::vector<vnn::LayerShape> layers{{13, 2, vnn::Activation::relu}, {13, 2, vnn::Activation::relu}};
  vnn::CovScale cov_scale = vnn::CovScale::none;
};

struct BaselineConfig {
  baseline::Kernel kernel = baseline::Kernel::linear;
  std::vector<Index> candidates;  // empty: default grid
  int folds = 10;
  int repeats = 5;
  double gamma = 0.0;
  double ridge = 1.0;
  double jitter = 1e-10;
  bool align_eigenbasis = false;
};

struct StabilityConfig {
  std::vector<experiments::Family> families{experiments::Family::vnn, experiments::Family::pca_lr};
  int trials = 20;
  Index nominal_n = 900;
  std::vector<Index> grid{300, 400, 500, 600, 700, 800, 899};
  double test_fraction = 0.1;
};

struct ScalingConfig {
  std::vector<double> taps{0.5, 0.3, 0.2};
  bool normalize_taps = true;
  std::vector<Index> n_grid{100, 316, 1000, 3162, 10000, 31623, 100000};
  int seeds = 20;
};

struct TransferConfig {
  std::vector<Index> train_dims;  // empty: every resolution
  std::vector<Index> eval_dims;
  int trials = 10;
  double test_fraction = 0.1;
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  std::string description;
  std::uint64_t seed = 0;
  std::string out;
  DataConfig data;
  ModelConfig model;
  vnn::TrainConfig train;
  BaselineConfig baseline;
  StabilityConfig stability;
  ScalingConfig scaling;
  experiments::LipschitzSweep lipschitz;
  TransferConfig transfer;
};

RunConfig parse(const nlohmann::json& doc);
RunConfig load(const std::filesystem::path& path);

/// Canonical echo of every effective value (defaults filled in).
nlohmann::json to_json(const RunConfig& cfg);

baseline::CvOptions cv_options(const RunConfig& cfg);
datagen::LowRankSpec lowrank_spec(const RunConfig& cfg);
datagen::EnsembleSpec ensemble_spec(const RunConfig& cfg);
datagen::MultiResSpec multires_spec(const RunConfig& cfg);

/// Stability run for one model family, seeded with the global seed.
experiments::StabilityRunSpec stability_spec(const RunConfig& cfg, experiments::Family family);
/// Scaling taps, normalized over the ensemble spectrum when requested.
spectral::FilterTaps scaling_taps(const RunConfig& cfg);

}  // namespace covnet::config
