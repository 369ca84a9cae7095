#pragma once

// coVariance neural networks: filter-bank perceptrons chained into a model
// with a dimension-free mean readout.

#include "covnet/numcore.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covnet::vnn {

enum class Activation { relu, tanh, identity };
enum class Readout { mean_all };
enum class CovScale { none, spectral };
enum class Optimizer { adam, sgd };

std::string to_string(Activation a);
std::string to_string(CovScale s);
std::string to_string(Optimizer o);
Activation parse_activation(std::string_view name);
CovScale parse_cov_scale(std::string_view name);
Optimizer parse_optimizer(std::string_view name);

struct LayerSpec {
  int f_in = 1;
  int f_out = 1;
  int taps = 1;
  Activation activation = Activation::relu;

  void validate() const;
};

/// F_out × F_in grid of polynomial filters with T taps each, stored as
/// taps[(f * F_in + g) * T + k].
class FilterBankLayer {
 public:
  explicit FilterBankLayer(LayerSpec spec);
  FilterBankLayer(LayerSpec spec, std::vector<double> taps);

  const LayerSpec& spec() const { return spec_; }

  std::span<const double> filter(int f, int g) const;
  std::span<double> filter(int f, int g);
  double tap(int f, int g, int k) const { return filter(f, g)[k]; }

  std::span<const double> taps() const { return taps_; }
  std::span<double> taps() { return taps_; }

 private:
  LayerSpec spec_;
  std::vector<double> taps_;
};

/// A VNN holds filter taps only; no parameter depends on the data dimension.
struct VnnModel {
  std::vector<FilterBankLayer> layers;
  int input_channels = 1;
  Readout readout = Readout::mean_all;
  CovScale cov_scale = CovScale::none;

  /// Channel chaining and tensor shapes.
  void validate() const;
  std::size_t parameter_count() const;
  /// Largest channel count over all layer inputs and outputs (F).
  int max_channels() const;
};

struct LayerShape {
  int f_out = 1;
  int taps = 2;
  Activation activation = Activation::relu;
};

/// Taps i.i.d. uniform on [−a, a], a = 1/√(F_in·T), from a seeded stream.
VnnModel init_model(int input_channels, std::span<const LayerShape> shapes,
                    std::uint64_t seed, CovScale cov_scale = CovScale::none);

/// One m × B matrix per channel; column b is sample b.
using Channels = std::vector<Matrix>;

struct LayerCache {
  std::vector<std::vector<Matrix>> powers;  // [g][k] = Sᵏ x_in[g]
  Channels pre;                             // pre-activation per output channel
  Channels out;
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  Index dim = 0;
  Index batch = 0;
  std::uint64_t fingerprint = 0;
};

struct ForwardResult {
  Vector predictions;  // one per column of the input
  ForwardCache cache;

  const Channels& output() const { return cache.layers.back().out; }
};

/// Per-layer tap gradients with the same layout as FilterBankLayer::taps().
using Gradient = std::vector<std::vector<double>>;

/// The operator the model filters with: Ĉ, or Ĉ/λ_max under CovScale::spectral.
Matrix effective_shift(const VnnModel& model, const CovarianceModel& cov);

/// x_out[f] = σ(Σ_g H_fg(S) x_in[g]) for a batch of signals.
Channels perceptron_forward(const Matrix& shift, const FilterBankLayer& layer,
                            const Channels& x_in, LayerCache* cache = nullptr);

/// Single-sample form: `x_in` is m × F_in (one column per channel).
Matrix perceptron_forward(const CovarianceModel& cov, const FilterBankLayer& layer,
                          const Matrix& x_in);

/// Batched forward pass with the cache needed for backward().
ForwardResult forward(const VnnModel& model, const CovarianceModel& cov,
                      const Channels& input);

/// Single-sample forward pass; `x` is m × F_in.
ForwardResult vnn_forward(const VnnModel& model, const CovarianceModel& cov,
                          const Matrix& x);

/// Chain rule from per-sample dLoss/dprediction back to every tap. Throws
/// when `cache` was not produced by forward() on the same model and operator.
Gradient backward(const VnnModel& model, const CovarianceModel& cov,
                  const ForwardCache& cache, const Vector& loss_grads);

Gradient vnn_backward(const VnnModel& model, const CovarianceModel& cov,
                      const ForwardCache& cache, double loss_grad);

/// Samples-by-features rows as a single-channel batch.
Channels rows_as_channel(const Matrix& features);

/// Model bound to a shift operator. Rebinding to a covariance of another
/// dimension is allowed because the model is dimension-free.
class BoundModel {
 public:
  BoundModel(VnnModel model, CovarianceModel cov);

  const VnnModel& model() const { return model_; }
  const CovarianceModel& covariance() const { return cov_; }

  /// One prediction per row of `features` (n × m).
  Vector predict(const Matrix& features) const;

 private:
  VnnModel model_;
  CovarianceModel cov_;
};

BoundModel swap_covariance(const VnnModel& model, const CovarianceModel& new_cov);

struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 0.0151;
  Optimizer optimizer = Optimizer::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  double validation_fraction = 0.1;

  void validate() const;
};

struct TrainTrace {
  std::vector<double> train_mse;       // mean minibatch loss per epoch
  std::vector<double> validation_mse;  // after each epoch
  int best_epoch = -1;                 // 1-based
  double best_validation_mse = 0.0;
};

struct TrainResult {
  VnnModel model;
  TrainTrace trace;
};

/// Mini-batch MSE training on a seeded train/validation split; returns the
/// snapshot with the lowest validation MSE (training MSE when the validation
/// fraction is zero).
TrainResult train(const VnnModel& model_init, const CovarianceModel& cov,
                  const Dataset& data, const TrainConfig& cfg);

/// Versioned JSON text; tap values round-trip bit-exactly.
std::string serialize(const VnnModel& model);
VnnModel deserialize(std::string_view blob);

inline constexpr int kModelSchemaVersion = 1;

}  // namespace covnet::vnn
