#include "covnet/config.hpp"

#include "covnet/error.hpp"
#include "covnet/io.hpp"

#include <set>

namespace covnet::config {

namespace {

using nlohmann::json;

std::string type_name(const json& j) { return j.type_name(); }

// Reads keys from one JSON object and remembers which were consumed so that
// leftovers can be reported with their full path.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorCode::schema, where() + ": expected an object, found " + type_name(j_));
  }

  bool has(const char* key) const { return j_.contains(key); }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    out = convert<T>(j_.at(key), key_path(key));
  }

  const json* raw(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  Section child(const char* key) {
    seen_.insert(key);
    return Section(j_.at(key), key_path(key));
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail(ErrorCode::schema, "unknown config key: " + key_path(k));
  }

  template <class T>
  static T convert(const json& v, const std::string& path) {
    auto bad = [&](const char* want) -> T {
      fail(ErrorCode::schema, path + ": expected " + want + ", found " + type_name(v));
    };
    if constexpr (std::is_same_v<T, bool>) {
      return v.is_boolean() ? v.get<bool>() : bad("a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      return v.is_string() ? v.get<std::string>() : bad("a string");
    } else if constexpr (std::is_same_v<T, double>) {
      return v.is_number() ? v.get<double>() : bad("a number");
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      return v.is_number_unsigned() ? v.get<std::uint64_t>() : bad("a nonnegative integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return bad("an integer");
      const auto x = v.get<long long>();
      if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max()) return bad("an integer in range");
      return static_cast<T>(x);
    } else {
      if (!v.is_array()) return bad("an array");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(convert<typename T::value_type>(v[i], path + "[" + std::to_string(i) + "]"));
      return out;
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Fn>
auto with_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    fail(ErrorCode::schema, path + ": " + e.what());
  }
}

void parse_data(Section s, DataConfig& d) {
  s.get("source", d.source);
  static const std::set<std::string> sources{"csv", "friedman1", "lowrank", "gaussian", "multires"};
  if (!sources.count(d.source)) fail(ErrorCode::schema, s.key_path("source") + ": unknown source '" + d.source + "'");
  s.get("path", d.path);
  s.get("test_path", d.test_path);
  s.get("header", d.header);
  s.get("target_col", d.target_col);
  s.get("samples", d.samples);
  s.get("dim", d.dim);
  s.get("noise_sd", d.noise_sd);
  s.get("n_informative", d.n_informative);
  s.get("effective_rank", d.effective_rank);
  s.get("tail_strength", d.tail_strength);
  s.get("spectrum", d.spectrum);
  s.get("ratio", d.ratio);
  s.get("rotation_seed", d.rotation_seed);
  s.get("fine_dim", d.fine_dim);
  s.get("resolutions", d.resolutions);
  s.get("regions", d.regions);
  s.get("latent_dim", d.latent_dim);
  s.get("target_noise_sd", d.target_noise_sd);
  s.get("block_constant", d.block_constant);
  s.get("rescale_unit_norm", d.rescale_unit_norm);
  s.finish();
}

void parse_model(Section s, ModelConfig& m) {
  s.get("input_channels", m.input_channels);
  std::string scale;
  s.get("cov_scale", scale);
  if (!scale.empty()) m.cov_scale = with_path(s.key_path("cov_scale"), [&] { return vnn::parse_cov_scale(scale); });
  if (const json* layers = s.raw("layers")) {
    if (!layers->is_array() || layers->empty())
      fail(ErrorCode::schema, s.key_path("layers") + ": expected a nonempty array");
    m.layers.clear();
    for (std::size_t i = 0; i < layers->size(); ++i) {
      Section l((*layers)[i], s.key_path("layers") + "[" + std::to_string(i) + "]");
      vnn::LayerShape shape;
      l.get("f_out", shape.f_out);
      l.get("taps", shape.taps);
      std::string act = "relu";
      l.get("activation", act);
      shape.activation = with_path(l.key_path("activation"), [&] { return vnn::parse_activation(act); });
      if (shape.f_out < 1 || shape.taps < 1)
        fail(ErrorCode::schema, l.key_path("f_out") + ": f_out and taps must be >= 1");
      l.finish();
      m.layers.push_back(shape);
    }
  }
  if (m.input_channels < 1) fail(ErrorCode::schema, s.key_path("input_channels") + ": must be >= 1");
  s.finish();
}

void parse_train(Section s, vnn::TrainConfig& t) {
  s.get("epochs", t.epochs);
  s.get("batch_size", t.batch_size);
  s.get("learning_rate", t.learning_rate);
  std::string opt;
  s.get("optimizer", opt);
  if (!opt.empty()) t.optimizer = with_path(s.key_path("optimizer"), [&] { return vnn::parse_optimizer(opt); });
  s.get("beta1", t.beta1);
  s.get("beta2", t.beta2);
  s.get("adam_eps", t.adam_eps);
  s.get("validation_fraction", t.validation_fraction);
  s.finish();
  with_path("train", [&] { t.validate(); return 0; });
}

void parse_baseline(Section s, BaselineConfig& b) {
  std::string kernel;
  s.get("kernel", kernel);
  if (!kernel.empty()) b.kernel = with_path(s.key_path("kernel"), [&] { return baseline::parse_kernel(kernel); });
  s.get("candidates", b.candidates);
  s.get("folds", b.folds);
  s.get("repeats", b.repeats);
  s.get("gamma", b.gamma);
  s.get("ridge", b.ridge);
  s.get("jitter", b.jitter);
  s.get("align_eigenbasis", b.align_eigenbasis);
  s.finish();
  if (b.folds < 2 || b.repeats < 1) fail(ErrorCode::schema, s.key_path("folds") + ": need folds >= 2, repeats >= 1");
}

void parse_experiment(Section s, RunConfig& cfg) {
  if (s.has("stability")) {
    Section e = s.child("stability");
    auto& st = cfg.stability;
    std::vector<std::string> fams;
    e.get("families", fams);
    if (!fams.empty()) {
      st.families.clear();
      for (const auto& f : fams)
        st.families.push_back(with_path(e.key_path("families"), [&] { return experiments::parse_family(f); }));
    }
    e.get("trials", st.trials);
    e.get("nominal_n", st.nominal_n);
    e.get("grid", st.grid);
    e.get("test_fraction", st.test_fraction);
    e.finish();
  }
  if (s.has("scaling")) {
    Section e = s.child("scaling");
    e.get("taps", cfg.scaling.taps);
    e.get("normalize_taps", cfg.scaling.normalize_taps);
    e.get("n_grid", cfg.scaling.n_grid);
    e.get("seeds", cfg.scaling.seeds);
    e.finish();
  }
  if (s.has("lipschitz")) {
    Section e = s.child("lipschitz");
    auto& l = cfg.lipschitz;
    e.get("cases", l.cases);
    e.get("max_layers", l.max_layers);
    e.get("max_features", l.max_features);
    e.get("min_dim", l.min_dim);
    e.get("max_dim", l.max_dim);
    e.get("taps", l.taps);
    e.get("batch", l.batch);
    e.finish();
  }
  if (s.has("transfer")) {
    Section e = s.child("transfer");
    e.get("train_dims", cfg.transfer.train_dims);
    e.get("eval_dims", cfg.transfer.eval_dims);
    e.get("trials", cfg.transfer.trials);
    e.get("test_fraction", cfg.transfer.test_fraction);
    e.finish();
  }
  s.finish();
}

json shapes_json(const std::vector<vnn::LayerShape>& layers) {
  json out = json::array();
  for (const auto& l : layers)
    out.push_back({{"f_out", l.f_out}, {"taps", l.taps}, {"activation", vnn::to_string(l.activation)}});
  return out;
}

}  // namespace

RunConfig parse(const json& doc) {
  RunConfig cfg;
  Section root(doc, "");
  root.get("schema_version", cfg.schema_version);
  if (cfg.schema_version != kConfigSchemaVersion)
    fail(ErrorCode::schema, "schema_version: unsupported version " + std::to_string(cfg.schema_version));
  root.get("description", cfg.description);
  root.get("seed", cfg.seed);
  root.get("out", cfg.out);
  if (root.has("data")) parse_data(root.child("data"), cfg.data);
  if (root.has("model")) parse_model(root.child("model"), cfg.model);
  if (root.has("train")) parse_train(root.child("train"), cfg.train);
  if (root.has("baseline")) parse_baseline(root.child("baseline"), cfg.baseline);
  if (root.has("experiment")) parse_experiment(root.child("experiment"), cfg);
  root.finish();
  return cfg;
}

RunConfig load(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::schema, path.string() + ": invalid JSON: " + e.what());
  }
  return parse(doc);
}

json to_json(const RunConfig& cfg) {
  const auto& d = cfg.data;
  std::vector<std::string> fams;
  for (auto f : cfg.stability.families) fams.push_back(experiments::to_string(f));
  return {
      {"schema_version", cfg.schema_version},
      {"description", cfg.description},
      {"seed", cfg.seed},
      {"out", cfg.out},
      {"data",
       {{"source", d.source}, {"path", d.path}, {"test_path", d.test_path}, {"header", d.header},
        {"target_col", d.target_col}, {"samples", d.samples}, {"dim", d.dim}, {"noise_sd", d.noise_sd},
        {"n_informative", d.n_informative}, {"effective_rank", d.effective_rank},
        {"tail_strength", d.tail_strength}, {"spectrum", d.spectrum}, {"ratio", d.ratio},
        {"rotation_seed", d.rotation_seed}, {"fine_dim", d.fine_dim}, {"resolutions", d.resolutions},
        {"regions", d.regions}, {"latent_dim", d.latent_dim}, {"target_noise_sd", d.target_noise_sd},
        {"block_constant", d.block_constant}, {"rescale_unit_norm", d.rescale_unit_norm}}},
      {"model",
       {{"input_channels", cfg.model.input_channels},
        {"cov_scale", vnn::to_string(cfg.model.cov_scale)},
        {"layers", shapes_json(cfg.model.layers)}}},
      {"train",
       {{"epochs", cfg.train.epochs}, {"batch_size", cfg.train.batch_size},
        {"learning_rate", cfg.train.learning_rate}, {"optimizer", vnn::to_string(cfg.train.optimizer)},
        {"beta1", cfg.train.beta1}, {"beta2", cfg.train.beta2}, {"adam_eps", cfg.train.adam_eps},
        {"validation_fraction", cfg.train.validation_fraction}}},
      {"baseline",
       {{"kernel", baseline::to_string(cfg.baseline.kernel)}, {"candidates", cfg.baseline.candidates},
        {"folds", cfg.baseline.folds}, {"repeats", cfg.baseline.repeats}, {"gamma", cfg.baseline.gamma},
        {"ridge", cfg.baseline.ridge}, {"jitter", cfg.baseline.jitter},
        {"align_eigenbasis", cfg.baseline.align_eigenbasis}}},
      {"experiment",
       {{"stability",
         {{"families", fams}, {"trials", cfg.stability.trials}, {"nominal_n", cfg.stability.nominal_n},
          {"grid", cfg.stability.grid}, {"test_fraction", cfg.stability.test_fraction}}},
        {"scaling",
         {{"taps", cfg.scaling.taps}, {"normalize_taps", cfg.scaling.normalize_taps},
          {"n_grid", cfg.scaling.n_grid}, {"seeds", cfg.scaling.seeds}}},
        {"lipschitz",
         {{"cases", cfg.lipschitz.cases}, {"max_layers", cfg.lipschitz.max_layers},
          {"max_features", cfg.lipschitz.max_features}, {"min_dim", cfg.lipschitz.min_dim},
          {"max_dim", cfg.lipschitz.max_dim}, {"taps", cfg.lipschitz.taps}, {"batch", cfg.lipschitz.batch}}},
        {"transfer",
         {{"train_dims", cfg.transfer.train_dims}, {"eval_dims", cfg.transfer.eval_dims},
          {"trials", cfg.transfer.trials}, {"test_fraction", cfg.transfer.test_fraction}}}}}};
}

baseline::CvOptions cv_options(const RunConfig& cfg) {
  baseline::CvOptions cv;
  cv.folds = cfg.baseline.folds;
  cv.repeats = cfg.baseline.repeats;
  cv.seed = cfg.seed;
  cv.jitter = cfg.baseline.jitter;
  cv.gamma = cfg.baseline.gamma;
  cv.ridge = cfg.baseline.ridge;
  return cv;
}

datagen::LowRankSpec lowrank_spec(const RunConfig& cfg) {
  datagen::LowRankSpec s;
  s.samples = cfg.data.samples;
  s.dim = cfg.data.dim;
  s.n_informative = cfg.data.n_informative;
  s.effective_rank = cfg.data.effective_rank;
  s.tail_strength = cfg.data.tail_strength;
  s.noise_sd = cfg.data.noise_sd;
  s.seed = cfg.seed;
  return s;
}

datagen::EnsembleSpec ensemble_spec(const RunConfig& cfg) {
  datagen::EnsembleSpec s;
  s.dim = cfg.data.dim;
  if (cfg.data.spectrum.empty()) {
    s.spectrum = datagen::geometric_spectrum(cfg.data.dim, cfg.data.ratio);
  } else {
    s.spectrum = Eigen::Map<const Vector>(cfg.data.spectrum.data(), static_cast<Index>(cfg.data.spectrum.size()));
  }
  s.rotation_seed = cfg.data.rotation_seed;
  return s;
}

datagen::MultiResSpec multires_spec(const RunConfig& cfg) {
  datagen::MultiResSpec s;
  s.fine_dim = cfg.data.fine_dim;
  s.resolutions = cfg.data.resolutions;
  s.regions = cfg.data.regions;
  s.latent_dim = cfg.data.latent_dim;
  s.samples = cfg.data.samples;
  s.noise_sd = cfg.data.noise_sd;
  s.target_noise_sd = cfg.data.target_noise_sd;
  s.block_constant = cfg.data.block_constant;
  s.seed = cfg.seed;
  return s;
}

experiments::StabilityRunSpec stability_spec(const RunConfig& cfg, experiments::Family family) {
  const auto& sc = cfg.stability;
  experiments::StabilityRunSpec spec;
  spec.family = family;
  spec.nominal_n = sc.nominal_n;
  spec.grid = sc.grid;
  spec.trials = sc.trials;
  spec.test_fraction = sc.test_fraction;
  spec.seed = cfg.seed;
  spec.architecture = cfg.model.layers;
  spec.cov_scale = cfg.model.cov_scale;
  spec.train = cfg.train;
  spec.candidates = cfg.baseline.candidates;
  spec.cv = cv_options(cfg);
  spec.align_eigenbasis = cfg.baseline.align_eigenbasis;
  return spec;
}

spectral::FilterTaps scaling_taps(const RunConfig& cfg) {
  spectral::FilterTaps taps(cfg.scaling.taps);
  if (cfg.scaling.normalize_taps) taps = spectral::normalize_response(taps, ensemble_spec(cfg).spectrum);
  return taps;
}

}  // namespace covnet::config
