#include "covnet/vnn.hpp"

#include "covnet/error.hpp"
#include "covnet/hash.hpp"
#include "covnet/kernels.hpp"
#include "covnet/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace covnet::vnn {

using json = nlohmann::json;

namespace {

constexpr Index kPredictChunk = 256;

std::uint64_t fingerprint(const VnnModel& model, const Matrix& shift) {
  Fnv1a h;
  for (const auto& layer : model.layers) h.update(layer.taps().data(), layer.taps().size() * sizeof(double));
  h.update_value(shift.rows());
  h.update(shift.data(), static_cast<std::size_t>(shift.size()) * sizeof(double));
  return h.digest();
}

Matrix activate(Activation a, const Matrix& pre) {
  switch (a) {
    case Activation::relu: return pre.cwiseMax(0.0);
    case Activation::tanh: return pre.array().tanh().matrix();
    case Activation::identity: return pre;
  }
  return pre;
}

// Elementwise σ'(pre); the ReLU subgradient at 0 is 0.
Matrix activation_slope(Activation a, const Matrix& pre, const Matrix& out) {
  switch (a) {
    case Activation::relu: return (pre.array() > 0.0).cast<double>().matrix();
    case Activation::tanh: return (1.0 - out.array().square()).matrix();
    case Activation::identity: return Matrix::Ones(pre.rows(), pre.cols());
  }
  return Matrix::Ones(pre.rows(), pre.cols());
}

Vector readout(const Channels& out) {
  const Index m = out.front().rows();
  Vector pred = Vector::Zero(out.front().cols());
  for (const auto& ch : out) pred += ch.colwise().sum().transpose();
  return pred / static_cast<double>(m * static_cast<Index>(out.size()));
}

ForwardResult forward_with_shift(const VnnModel& model, const Matrix& shift, const Channels& input,
                                 bool keep_cache) {
  model.validate();
  require(static_cast<int>(input.size()) == model.input_channels, ErrorCode::dimension_mismatch,
          "vnn_forward: expected " + std::to_string(model.input_channels) + " input channels, got " +
              std::to_string(input.size()));
  ForwardResult result;
  result.cache.dim = shift.rows();
  result.cache.batch = input.front().cols();
  result.cache.layers.resize(model.layers.size());
  Channels current = input;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    LayerCache& lc = result.cache.layers[l];
    current = perceptron_forward(shift, model.layers[l], current, &lc);
    if (!keep_cache && l + 1 < model.layers.size()) {
      lc.powers.clear();
      lc.pre.clear();
      lc.out.clear();
    }
  }
  result.predictions = readout(current);
  if (keep_cache) result.cache.fingerprint = fingerprint(model, shift);
  return result;
}

Gradient backward_with_shift(const VnnModel& model, const Matrix& shift, const ForwardCache& cache,
                             const Vector& loss_grads) {
  require(cache.layers.size() == model.layers.size() && cache.dim == shift.rows() &&
              cache.fingerprint == fingerprint(model, shift),
          ErrorCode::invalid_argument, "vnn_backward: stale forward cache");
  require(loss_grads.size() == cache.batch, ErrorCode::dimension_mismatch,
          "vnn_backward: loss gradient count != batch size");
  const Index m = cache.dim;
  const Index batch = cache.batch;
  const int f_last = model.layers.back().spec().f_out;

  Gradient grad(model.layers.size());
  Channels d_out(static_cast<std::size_t>(f_last));
  const Eigen::RowVectorXd scale = loss_grads.transpose() / static_cast<double>(m * f_last);
  for (auto& d : d_out) d = scale.replicate(m, 1);

  for (std::size_t l = model.layers.size(); l-- > 0;) {
    const FilterBankLayer& layer = model.layers[l];
    const LayerSpec& spec = layer.spec();
    const LayerCache& lc = cache.layers[l];
    require(!lc.powers.empty(), ErrorCode::invalid_argument, "vnn_backward: forward cache was not retained");

    Channels g_pre(static_cast<std::size_t>(spec.f_out));
    for (int f = 0; f < spec.f_out; ++f)
      g_pre[f] = d_out[f].cwiseProduct(activation_slope(spec.activation, lc.pre[f], lc.out[f]));

    auto& gl = grad[l];
    gl.assign(layer.taps().size(), 0.0);
    for (int f = 0; f < spec.f_out; ++f)
      for (int g = 0; g < spec.f_in; ++g)
        for (int k = 0; k < spec.taps; ++k)
          gl[(static_cast<std::size_t>(f) * spec.f_in + g) * spec.taps + k] =
              g_pre[f].cwiseProduct(lc.powers[g][k]).sum();

    if (l == 0) break;
    // dx_in[g] = Σ_k Sᵏ (Σ_f h_fgk g_pre[f]), Horner in S (S is symmetric).
    Channels d_in(static_cast<std::size_t>(spec.f_in));
    for (int g = 0; g < spec.f_in; ++g) {
      Matrix acc = Matrix::Zero(m, batch);
      for (int k = spec.taps - 1; k >= 0; --k) {
        if (k < spec.taps - 1) acc = shift * acc;
        for (int f = 0; f < spec.f_out; ++f) acc.noalias() += layer.tap(f, g, k) * g_pre[f];
      }
      d_in[g] = std::move(acc);
    }
    d_out = std::move(d_in);
  }
  return grad;
}

Vector predict_rows(const VnnModel& model, const Matrix& shift, const Matrix& features) {
  require(features.cols() == shift.rows(), ErrorCode::dimension_mismatch,
          "predict: feature count " + std::to_string(features.cols()) + " != covariance dimension " +
              std::to_string(shift.rows()));
  require(model.input_channels == 1, ErrorCode::invalid_argument,
          "predict: row data feeds a single input channel");
  Vector out(features.rows());
  for (Index start = 0; start < features.rows(); start += kPredictChunk) {
    const Index width = std::min(kPredictChunk, features.rows() - start);
    Channels in{features.middleRows(start, width).transpose()};
    out.segment(start, width) = forward_with_shift(model, shift, in, false).predictions;
  }
  return out;
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "?";
}

std::string to_string(CovScale s) { return s == CovScale::none ? "none" : "spectral"; }
std::string to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  fail(ErrorCode::schema, "unknown activation '" + std::string(name) + "'");
}

CovScale parse_cov_scale(std::string_view name) {
  if (name == "none") return CovScale::none;
  if (name == "spectral") return CovScale::spectral;
  fail(ErrorCode::schema, "unknown cov_scale '" + std::string(name) + "'");
}

Optimizer parse_optimizer(std::string_view name) {
  if (name == "adam") return Optimizer::adam;
  if (name == "sgd") return Optimizer::sgd;
  fail(ErrorCode::schema, "unknown optimizer '" + std::string(name) + "'");
}

void LayerSpec::validate() const {
  require(f_in >= 1 && f_out >= 1 && taps >= 1, ErrorCode::invalid_argument,
          "layer channel and tap counts must be >= 1");
}

FilterBankLayer::FilterBankLayer(LayerSpec spec) : spec_(spec) {
  spec_.validate();
  taps_.assign(static_cast<std::size_t>(spec_.f_out) * spec_.f_in * spec_.taps, 0.0);
}

FilterBankLayer::FilterBankLayer(LayerSpec spec, std::vector<double> taps)
    : spec_(spec), taps_(std::move(taps)) {
  spec_.validate();
  require(taps_.size() == static_cast<std::size_t>(spec_.f_out) * spec_.f_in * spec_.taps,
          ErrorCode::dimension_mismatch, "filter bank tap tensor does not match its layer spec");
  for (double t : taps_) require(std::isfinite(t), ErrorCode::non_finite, "filter taps must be finite");
}

std::span<const double> FilterBankLayer::filter(int f, int g) const {
  return std::span<const double>(taps_).subspan((static_cast<std::size_t>(f) * spec_.f_in + g) * spec_.taps,
                                                spec_.taps);
}

std::span<double> FilterBankLayer::filter(int f, int g) {
  return std::span<double>(taps_).subspan((static_cast<std::size_t>(f) * spec_.f_in + g) * spec_.taps,
                                          spec_.taps);
}

void VnnModel::validate() const {
  require(!layers.empty(), ErrorCode::invalid_argument, "model has no layers");
  require(input_channels >= 1, ErrorCode::invalid_argument, "input_channels must be >= 1");
  require(layers.front().spec().f_in == input_channels, ErrorCode::dimension_mismatch,
          "first layer f_in != input_channels");
  for (std::size_t l = 1; l < layers.size(); ++l)
    require(layers[l].spec().f_in == layers[l - 1].spec().f_out, ErrorCode::dimension_mismatch,
            "layer " + std::to_string(l) + " f_in does not match previous f_out");
}

std::size_t VnnModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.taps().size();
  return n;
}

int VnnModel::max_channels() const {
  int f = input_channels;
  for (const auto& l : layers) f = std::max({f, l.spec().f_in, l.spec().f_out});
  return f;
}

VnnModel init_model(int input_channels, std::span<const LayerShape> shapes, std::uint64_t seed,
                    CovScale cov_scale) {
  require(!shapes.empty(), ErrorCode::invalid_argument, "architecture has no layers");
  Rng rng(seed);
  VnnModel model;
  model.input_channels = input_channels;
  model.cov_scale = cov_scale;
  int f_in = input_channels;
  for (const auto& s : shapes) {
    FilterBankLayer layer(LayerSpec{f_in, s.f_out, s.taps, s.activation});
    const double a = 1.0 / std::sqrt(static_cast<double>(f_in) * s.taps);
    for (double& t : layer.taps()) t = rng.uniform(-a, a);
    model.layers.push_back(std::move(layer));
    f_in = s.f_out;
  }
  model.validate();
  return model;
}

Matrix effective_shift(const VnnModel& model, const CovarianceModel& cov) {
  if (model.cov_scale == CovScale::spectral) return cov.spectrally_normalized().matrix();
  return cov.matrix();
}

Channels perceptron_forward(const Matrix& shift, const FilterBankLayer& layer, const Channels& x_in,
                            LayerCache* cache) {
  const LayerSpec& spec = layer.spec();
  require(static_cast<int>(x_in.size()) == spec.f_in, ErrorCode::dimension_mismatch,
          "perceptron: expected " + std::to_string(spec.f_in) + " input channels, got " +
              std::to_string(x_in.size()));
  const Index m = shift.rows();
  require(spec.taps <= m + 1, ErrorCode::invalid_argument, "perceptron: taps exceed m + 1");
  const Index batch = x_in.front().cols();
  for (const auto& x : x_in)
    require(x.rows() == m && x.cols() == batch, ErrorCode::dimension_mismatch,
            "perceptron: input is " + std::to_string(x.rows()) + "-dimensional, covariance is " +
                std::to_string(m) + "-dimensional");

  std::vector<std::vector<Matrix>> powers(static_cast<std::size_t>(spec.f_in));
  for (int g = 0; g < spec.f_in; ++g) powers[g] = kernels::krylov(shift, x_in[g], spec.taps);

  Channels pre(static_cast<std::size_t>(spec.f_out));
  Channels out(static_cast<std::size_t>(spec.f_out));
  for (int f = 0; f < spec.f_out; ++f) {
    Matrix acc = Matrix::Zero(m, batch);
    for (int g = 0; g < spec.f_in; ++g)
      for (int k = 0; k < spec.taps; ++k) acc.noalias() += layer.tap(f, g, k) * powers[g][k];
    out[f] = activate(spec.activation, acc);
    pre[f] = std::move(acc);
  }
  if (cache != nullptr) {
    cache->powers = std::move(powers);
    cache->pre = std::move(pre);
    cache->out = out;
  }
  return out;
}

Matrix perceptron_forward(const CovarianceModel& cov, const FilterBankLayer& layer, const Matrix& x_in) {
  require(x_in.rows() == cov.dim(), ErrorCode::dimension_mismatch, "perceptron: dimension mismatch");
  Channels in;
  for (Index g = 0; g < x_in.cols(); ++g) in.push_back(x_in.col(g));
  const Channels out = perceptron_forward(cov.matrix(), layer, in);
  Matrix result(cov.dim(), static_cast<Index>(out.size()));
  for (std::size_t f = 0; f < out.size(); ++f) result.col(static_cast<Index>(f)) = out[f].col(0);
  return result;
}

ForwardResult forward(const VnnModel& model, const CovarianceModel& cov, const Channels& input) {
  return forward_with_shift(model, effective_shift(model, cov), input, true);
}

ForwardResult vnn_forward(const VnnModel& model, const CovarianceModel& cov, const Matrix& x) {
  require(x.rows() == cov.dim(), ErrorCode::dimension_mismatch,
          "vnn_forward: input is " + std::to_string(x.rows()) + "-dimensional, covariance is " +
              std::to_string(cov.dim()) + "-dimensional");
  Channels in;
  for (Index g = 0; g < x.cols(); ++g) in.push_back(x.col(g));
  return forward(model, cov, in);
}

Gradient backward(const VnnModel& model, const CovarianceModel& cov, const ForwardCache& cache,
                  const Vector& loss_grads) {
  return backward_with_shift(model, effective_shift(model, cov), cache, loss_grads);
}

Gradient vnn_backward(const VnnModel& model, const CovarianceModel& cov, const ForwardCache& cache,
                      double loss_grad) {
  return backward(model, cov, cache, Vector::Constant(1, loss_grad));
}

Channels rows_as_channel(const Matrix& features) { return Channels{features.transpose()}; }

BoundModel::BoundModel(VnnModel model, CovarianceModel cov) : model_(std::move(model)), cov_(std::move(cov)) {
  model_.validate();
}

Vector BoundModel::predict(const Matrix& features) const {
  return predict_rows(model_, effective_shift(model_, cov_), features);
}

BoundModel swap_covariance(const VnnModel& model, const CovarianceModel& new_cov) {
  return BoundModel(model, new_cov);
}

void TrainConfig::validate() const {
  require(epochs >= 1, ErrorCode::invalid_argument, "epochs must be >= 1");
  require(batch_size >= 1, ErrorCode::invalid_argument, "batch_size must be >= 1");
  require(learning_rate >= 0.0 && std::isfinite(learning_rate), ErrorCode::invalid_argument,
          "learning_rate must be finite and nonnegative");
  require(validation_fraction >= 0.0 && validation_fraction < 1.0, ErrorCode::invalid_argument,
          "validation_fraction must be in [0, 1)");
  require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && adam_eps > 0.0,
          ErrorCode::invalid_argument, "invalid Adam constants");
}

TrainResult train(const VnnModel& model_init, const CovarianceModel& cov, const Dataset& data,
                  const TrainConfig& cfg) {
  cfg.validate();
  data.validate();
  require(data.has_targets(), ErrorCode::invalid_argument, "train: dataset has no targets");
  model_init.validate();
  require(model_init.input_channels == 1, ErrorCode::invalid_argument, "train: row data feeds one input channel");
  require(data.dim() == cov.dim(), ErrorCode::dimension_mismatch, "train: data and covariance dimensions differ");

  const Matrix shift = effective_shift(model_init, cov);
  const Index n = data.samples();
  Rng rng(cfg.seed);
  const std::vector<long> perm = rng.permutation(n);
  const auto n_val = static_cast<Index>(std::floor(cfg.validation_fraction * static_cast<double>(n)));
  require(n - n_val >= 1, ErrorCode::invalid_argument, "train: validation split leaves no training samples");

  std::vector<Index> val_idx(perm.begin(), perm.begin() + n_val);
  std::vector<Index> train_idx(perm.begin() + n_val, perm.end());
  const Dataset train_set = data.select(train_idx);
  const Dataset val_set = data.select(val_idx);
  const Matrix train_cols = train_set.features.transpose();  // m × n_train
  const Vector& y = *train_set.targets;
  const Index n_train = train_set.samples();

  VnnModel model = model_init;
  std::vector<std::vector<double>> m1(model.layers.size()), m2(model.layers.size());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    m1[l].assign(model.layers[l].taps().size(), 0.0);
    m2[l].assign(model.layers[l].taps().size(), 0.0);
  }

  TrainResult result{model, {}};
  double best = std::numeric_limits<double>::infinity();
  long step = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const std::vector<long> order = rng.permutation(n_train);
    double loss_sum = 0.0;
    Index seen = 0;
    for (Index start = 0; start < n_train; start += cfg.batch_size) {
      const Index width = std::min<Index>(cfg.batch_size, n_train - start);
      Matrix xb(train_cols.rows(), width);
      Vector yb(width);
      for (Index b = 0; b < width; ++b) {
        xb.col(b) = train_cols.col(order[start + b]);
        yb[b] = y[order[start + b]];
      }
      const ForwardResult fr = forward_with_shift(model, shift, Channels{xb}, true);
      const Vector resid = fr.predictions - yb;
      const double loss = resid.squaredNorm() / static_cast<double>(width);
      require(std::isfinite(loss), ErrorCode::numerical,
              "train: non-finite loss at epoch " + std::to_string(epoch) + ", batch starting at " +
                  std::to_string(start) + " (learning rate " + std::to_string(cfg.learning_rate) + ")");
      loss_sum += loss * static_cast<double>(width);
      seen += width;
      const Gradient grad = backward_with_shift(model, shift, fr.cache, 2.0 * resid / static_cast<double>(width));

      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto taps = model.layers[l].taps();
        for (std::size_t i = 0; i < taps.size(); ++i) {
          const double g = grad[l][i];
          if (cfg.optimizer == Optimizer::sgd) {
            taps[i] -= cfg.learning_rate * g;
            continue;
          }
          m1[l][i] = cfg.beta1 * m1[l][i] + (1.0 - cfg.beta1) * g;
          m2[l][i] = cfg.beta2 * m2[l][i] + (1.0 - cfg.beta2) * g * g;
          taps[i] -= cfg.learning_rate * (m1[l][i] / c1) / (std::sqrt(m2[l][i] / c2) + cfg.adam_eps);
        }
      }
    }
    result.trace.train_mse.push_back(loss_sum / static_cast<double>(seen));

    const Dataset& select_set = n_val > 0 ? val_set : train_set;
    const Vector pred = predict_rows(model, shift, select_set.features);
    const double mse = (pred - *select_set.targets).squaredNorm() / static_cast<double>(select_set.samples());
    require(std::isfinite(mse), ErrorCode::numerical,
            "train: non-finite validation loss at epoch " + std::to_string(epoch));
    result.trace.validation_mse.push_back(mse);
    if (mse < best) {
      best = mse;
      result.model = model;
      result.trace.best_epoch = epoch;
      result.trace.best_validation_mse = mse;
    }
  }
  return result;
}

std::string serialize(const VnnModel& model) {
  model.validate();
  json layers = json::array();
  for (const auto& layer : model.layers) {
    const LayerSpec& s = layer.spec();
    json taps = json::array();
    for (int f = 0; f < s.f_out; ++f) {
      json row = json::array();
      for (int g = 0; g < s.f_in; ++g) {
        const auto h = layer.filter(f, g);
        row.push_back(json(std::vector<double>(h.begin(), h.end())));
      }
      taps.push_back(std::move(row));
    }
    layers.push_back({{"f_in", s.f_in},
                      {"f_out", s.f_out},
                      {"taps_per_filter", s.taps},
                      {"activation", to_string(s.activation)},
                      {"taps", std::move(taps)}});
  }
  json doc = {{"schema_version", kModelSchemaVersion},
              {"readout", "mean_all"},
              {"input_channels", model.input_channels},
              {"cov_scale", to_string(model.cov_scale)},
              {"layers", std::move(layers)}};
  return doc.dump(2) + "\n";
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    require(keys.count(k) > 0, ErrorCode::schema, "model blob: unknown key '" + where + k + "'");
}

template <typename T>
T get_field(const json& obj, const char* key, const std::string& where) {
  require(obj.contains(key), ErrorCode::schema, "model blob: missing key '" + where + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::schema, "model blob: key '" + where + key + "' has the wrong type");
  }
}

}  // namespace

VnnModel deserialize(std::string_view blob) {
  json doc;
  try {
    doc = json::parse(blob);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::schema, std::string("model blob is not valid JSON: ") + e.what());
  }
  require(doc.is_object(), ErrorCode::schema, "model blob must be a JSON object");
  reject_unknown(doc, {"schema_version", "readout", "input_channels", "cov_scale", "layers"}, "");
  const int version = get_field<int>(doc, "schema_version", "");
  require(version == kModelSchemaVersion, ErrorCode::schema,
          "model blob schema_version " + std::to_string(version) + " is not supported (expected " +
              std::to_string(kModelSchemaVersion) + ")");
  require(get_field<std::string>(doc, "readout", "") == "mean_all", ErrorCode::schema,
          "model blob: readout must be 'mean_all'");

  VnnModel model;
  model.input_channels = doc.contains("input_channels") ? get_field<int>(doc, "input_channels", "") : 1;
  if (doc.contains("cov_scale")) model.cov_scale = parse_cov_scale(get_field<std::string>(doc, "cov_scale", ""));
  require(doc.contains("layers") && doc["layers"].is_array(), ErrorCode::schema,
          "model blob: 'layers' must be an array");
  require(!doc["layers"].empty(), ErrorCode::schema, "model blob: 'layers' is empty");

  for (std::size_t l = 0; l < doc["layers"].size(); ++l) {
    const json& jl = doc["layers"][l];
    const std::string where = "layers[" + std::to_string(l) + "].";
    require(jl.is_object(), ErrorCode::schema, "model blob: " + where + " must be an object");
    reject_unknown(jl, {"f_in", "f_out", "taps_per_filter", "activation", "taps"}, where);
    LayerSpec spec{get_field<int>(jl, "f_in", where), get_field<int>(jl, "f_out", where),
                   get_field<int>(jl, "taps_per_filter", where),
                   parse_activation(get_field<std::string>(jl, "activation", where))};
    require(spec.f_in >= 1 && spec.f_out >= 1 && spec.taps >= 1, ErrorCode::schema,
            "model blob: " + where + " counts must be >= 1");
    const auto taps = get_field<std::vector<std::vector<std::vector<double>>>>(jl, "taps", where);
    require(static_cast<int>(taps.size()) == spec.f_out, ErrorCode::schema,
            "model blob: " + where + "taps has wrong f_out extent");
    std::vector<double> flat;
    for (const auto& row : taps) {
      require(static_cast<int>(row.size()) == spec.f_in, ErrorCode::schema,
              "model blob: " + where + "taps has wrong f_in extent");
      for (const auto& h : row) {
        require(static_cast<int>(h.size()) == spec.taps, ErrorCode::schema,
                "model blob: " + where + "filter has wrong tap count");
        flat.insert(flat.end(), h.begin(), h.end());
      }
    }
    model.layers.emplace_back(spec, std::move(flat));
  }
  try {
    model.validate();
  } catch (const Error& e) {
    fail(ErrorCode::schema, std::string("model blob: ") + e.what());
  }
  return model;
}

}  // namespace covnet::vnn
