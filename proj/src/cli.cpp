#include "covnet/cli.hpp"

#include "covnet/baseline.hpp"
#include "covnet/config.hpp"
#include "covnet/datagen.hpp"
#include "covnet/error.hpp"
#include "covnet/experiments.hpp"
#include "covnet/io.hpp"
#include "covnet/kernels.hpp"
#include "covnet/parallel.hpp"
#include "covnet/reports.hpp"
#include "covnet/rng.hpp"
#include "covnet/spectral.hpp"
#include "covnet/vnn.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <map>
#include <ostream>

namespace covnet::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::string data;
  std::string target_col;
  std::string cov_scale;
  std::string model;
  std::string cov;
  std::string kernel;
  std::string test;
  bool oracle = false;

  bool seed_set = false;
  bool header_set = false;
};

// Everything a subcommand needs once flags and config are merged.
struct Context {
  std::string command;
  Flags flags;
  config::RunConfig cfg;
  fs::path out_dir;
  io::Manifest manifest;
  std::ostream& out;
};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

io::CsvOptions csv_options(const config::DataConfig& d) { return {d.header, d.target_col}; }

Dataset read_csv(Context& ctx, const std::string& path) {
  const auto opts = csv_options(ctx.cfg.data);
  Dataset d = io::read_dataset(path, opts);
  ctx.manifest.add_input(path);
  if (opts.target_col != "last" && opts.target_col != "none" && !opts.target_col.empty())
    ctx.manifest.add_input(opts.target_col);
  return d;
}

void maybe_rescale(Context& ctx, Dataset& d) {
  if (!ctx.cfg.data.rescale_unit_norm) return;
  const double norm = d.features.rowwise().norm().maxCoeff();
  if (norm > 0.0) d.features /= norm;
  ctx.manifest.note("rescale_divisor", norm);
}

Dataset load_data(Context& ctx) {
  const auto& d = ctx.cfg.data;
  const std::uint64_t seed = ctx.cfg.seed;
  Dataset data;
  if (d.source == "csv") {
    require(!d.path.empty(), ErrorCode::invalid_argument, "no input data: pass --data PATH or set data.path");
    data = read_csv(ctx, d.path);
  } else if (d.source == "friedman1") {
    data = datagen::gen_friedman1(d.samples, d.dim, d.noise_sd, seed);
  } else if (d.source == "lowrank") {
    data = datagen::gen_lowrank_regression(config::lowrank_spec(ctx.cfg));
  } else if (d.source == "gaussian") {
    data = datagen::gen_gaussian_ensemble(config::ensemble_spec(ctx.cfg), d.samples, seed).data;
  } else {
    fail(ErrorCode::invalid_argument, "data.source '" + d.source + "' is not supported by '" + ctx.command + "'");
  }
  maybe_rescale(ctx, data);
  return data;
}

fs::path output(Context& ctx, const std::string& name, const std::string& content) {
  const fs::path p = ctx.out_dir / name;
  io::write_file(p, content);
  ctx.manifest.add_output(p);
  return p;
}

void output_matrix(Context& ctx, const std::string& name, const Matrix& m,
                   const std::vector<std::string>& header = {}) {
  const fs::path p = ctx.out_dir / name;
  io::write_matrix(p, m, header);
  ctx.manifest.add_output(p);
}

void output_json(Context& ctx, const std::string& name, const json& j) { output(ctx, name, j.dump(2) + "\n"); }

json metrics_json(const Vector& pred, const Vector& truth) {
  return {{"mae", experiments::mae(pred, truth)}, {"pearson", [&]() -> json {
             const double r = experiments::pearson_or_nan(pred, truth);
             return std::isfinite(r) ? json(r) : json(nullptr);
           }()}};
}

CovarianceModel covariance_for(Context& ctx, const Dataset& data) {
  if (ctx.flags.cov.empty()) return sample_covariance(data);
  ctx.manifest.add_input(ctx.flags.cov);
  return CovarianceModel(io::read_matrix(ctx.flags.cov));
}

// ---- subcommands ---------------------------------------------------------

int cmd_datagen(Context& ctx) {
  const auto& d = ctx.cfg.data;
  require(d.source != "csv", ErrorCode::invalid_argument, "datagen needs a generator source in data.source");
  if (d.source == "multires") {
    const auto mr = datagen::gen_multires(config::multires_spec(ctx.cfg));
    io::write_dataset(ctx.out_dir / "data_fine.csv", mr.fine);
    ctx.manifest.add_output(ctx.out_dir / "data_fine.csv");
    for (std::size_t i = 0; i < mr.coarse.size(); ++i) {
      const std::string name = "data_" + std::to_string(mr.coarse[i].dim()) + ".csv";
      io::write_dataset(ctx.out_dir / name, mr.coarse[i]);
      ctx.manifest.add_output(ctx.out_dir / name);
    }
    output_matrix(ctx, "latent.csv", mr.latent);
    ctx.out << "wrote " << mr.coarse.size() + 1 << " resolutions of " << mr.fine.samples() << " samples to "
            << ctx.out_dir.string() << "\n";
    return kExitOk;
  }
  Dataset data;
  if (d.source == "gaussian") {
    const auto spec = config::ensemble_spec(ctx.cfg);
    auto sample = datagen::gen_gaussian_ensemble(spec, d.samples, ctx.cfg.seed);
    output_matrix(ctx, "ensemble_covariance.csv", sample.ensemble.matrix());
    data = std::move(sample.data);
  } else {
    data = load_data(ctx);
  }
  io::write_dataset(ctx.out_dir / "data.csv", data);
  ctx.manifest.add_output(ctx.out_dir / "data.csv");
  ctx.out << "wrote " << data.samples() << " x " << data.dim() << " dataset to " << (ctx.out_dir / "data.csv").string()
          << "\n";
  return kExitOk;
}

int cmd_fit(Context& ctx) {
  const Dataset data = load_data(ctx);
  require(data.has_targets(), ErrorCode::invalid_argument, "fit: dataset has no targets");
  require(ctx.cfg.model.input_channels == 1, ErrorCode::invalid_argument,
          "fit: CSV data provides a single input channel; set model.input_channels to 1");
  const CovarianceModel cov = sample_covariance(data);
  const auto init = vnn::init_model(1, ctx.cfg.model.layers, derive_seed(ctx.cfg.seed, 1), ctx.cfg.model.cov_scale);
  vnn::TrainConfig tc = ctx.cfg.train;
  tc.seed = derive_seed(ctx.cfg.seed, 2);
  const auto result = vnn::train(init, cov, data, tc);

  output(ctx, "model.json", vnn::serialize(result.model));
  output_matrix(ctx, "covariance.csv", cov.matrix());
  std::string trace = "epoch,train_mse,validation_mse\n";
  for (std::size_t e = 0; e < result.trace.train_mse.size(); ++e)
    trace += std::to_string(e + 1) + "," + io::format_double(result.trace.train_mse[e]) + "," +
             io::format_double(result.trace.validation_mse[e]) + "\n";
  output(ctx, "trace.csv", trace);
  const Vector pred = vnn::BoundModel(result.model, cov).predict(data.features);
  output_matrix(ctx, "predictions.csv", pred, {"prediction"});
  json metrics = metrics_json(pred, *data.targets);
  metrics["best_epoch"] = result.trace.best_epoch;
  metrics["best_validation_mse"] = result.trace.best_validation_mse;
  metrics["parameters"] = result.model.parameter_count();
  output_json(ctx, "metrics.json", metrics);
  ctx.out << "trained " << result.model.layers.size() << "-layer VNN (" << result.model.parameter_count()
          << " taps) on " << data.samples() << " x " << data.dim() << "; best epoch " << result.trace.best_epoch
          << ", train MAE " << fmt(metrics["mae"].get<double>()) << "\n";
  return kExitOk;
}

int cmd_predict(Context& ctx) {
  require(!ctx.flags.model.empty(), ErrorCode::invalid_argument, "predict: --model PATH is required");
  const vnn::VnnModel model = vnn::deserialize(io::read_file(ctx.flags.model));
  ctx.manifest.add_input(ctx.flags.model);
  const Dataset data = load_data(ctx);
  const CovarianceModel cov = covariance_for(ctx, data);
  const Vector pred = vnn::BoundModel(model, cov).predict(data.features);
  output_matrix(ctx, "predictions.csv", pred, {"prediction"});
  if (data.has_targets()) {
    const json metrics = metrics_json(pred, *data.targets);
    output_json(ctx, "metrics.json", metrics);
    ctx.out << "MAE " << fmt(metrics["mae"].get<double>()) << "\n";
  }
  ctx.out << "wrote " << pred.size() << " predictions\n";
  return kExitOk;
}

int cmd_pca(Context& ctx) {
  const Dataset data = load_data(ctx);
  const CovarianceModel cov = sample_covariance(data);
  const EigenSystem& eigen = cov.eigen();
  const spectral::PcaFilterbank bank(eigen);
  Matrix scores(data.samples(), data.dim());
  parallel_for(data.samples(), [&](long i) {
    scores.row(i) = spectral::pca_scores_via_filterbank(bank, data.features.row(i).transpose()).transpose();
  });
  output_matrix(ctx, "scores.csv", scores);
  output_matrix(ctx, "eigenvalues.csv", eigen.values, {"eigenvalue"});
  output_matrix(ctx, "eigenvectors.csv", eigen.vectors);
  if (!ctx.flags.oracle) {
    ctx.out << "wrote " << scores.rows() << " x " << scores.cols() << " filterbank scores\n";
    return kExitOk;
  }
  const Matrix direct = data.features * eigen.vectors;
  const double gap = (scores - direct).cwiseAbs().maxCoeff();
  ctx.manifest.note("oracle_max_discrepancy", gap);
  ctx.out << "max discrepancy " << fmt(gap, "%.3e") << " (tolerance 1e-09)\n";
  return gap <= 1e-9 ? kExitOk : kExitCheck;
}

int cmd_baseline(Context& ctx) {
  if (!ctx.flags.model.empty()) {
    const auto reg = reports::regressor_from_json(json::parse(io::read_file(ctx.flags.model)));
    ctx.manifest.add_input(ctx.flags.model);
    const Dataset data = load_data(ctx);
    const Vector pred = ctx.flags.cov.empty()
                            ? reg.predict(data.features)
                            : baseline::reproject_with(covariance_for(ctx, data).eigen(), reg, data.features,
                                                       ctx.cfg.baseline.align_eigenbasis);
    output_matrix(ctx, "predictions.csv", pred, {"prediction"});
    if (data.has_targets()) output_json(ctx, "metrics.json", metrics_json(pred, *data.targets));
    ctx.out << "wrote " << pred.size() << " predictions\n";
    return kExitOk;
  }

  const Dataset data = load_data(ctx);
  require(data.has_targets(), ErrorCode::invalid_argument, "baseline: dataset has no targets");
  const CovarianceModel cov = sample_covariance(data);
  const EigenSystem& eigen = cov.eigen();
  const auto& bc = ctx.cfg.baseline;
  const auto candidates = bc.candidates.empty() ? baseline::default_candidates(data.dim(), data.samples()) : bc.candidates;
  const auto cv = baseline::cv_select_components(data, eigen, candidates, bc.kernel, config::cv_options(ctx.cfg));
  baseline::PcaRegressor reg;
  if (bc.kernel == baseline::Kernel::linear) {
    reg = baseline::fit_pca_linear(data, eigen, cv.selected, bc.jitter);
  } else {
    const double gamma = bc.gamma > 0.0 ? bc.gamma : baseline::default_gamma(data, eigen, cv.selected);
    reg = baseline::fit_pca_rbf(data, eigen, cv.selected, gamma, bc.ridge);
  }
  output_json(ctx, "baseline.json", reports::to_json(reg));
  output_matrix(ctx, "covariance.csv", cov.matrix());
  std::string cv_csv = "components,mean_mse\n";
  for (std::size_t i = 0; i < cv.candidates.size(); ++i)
    cv_csv += std::to_string(cv.candidates[i]) + "," + io::format_double(cv.mean_mse[i]) + "\n";
  output(ctx, "cv.csv", cv_csv);
  const Vector pred = reg.predict(data.features);
  output_matrix(ctx, "predictions.csv", pred, {"prediction"});
  json metrics = {{"kernel", baseline::to_string(bc.kernel)},
                  {"components", cv.selected},
                  {"train", metrics_json(pred, *data.targets)}};
  if (!ctx.cfg.data.test_path.empty()) {
    const Dataset test = read_csv(ctx, ctx.cfg.data.test_path);
    const Vector tp = reg.predict(test.features);
    output_matrix(ctx, "test_predictions.csv", tp, {"prediction"});
    if (test.has_targets()) metrics["test"] = metrics_json(tp, *test.targets);
  }
  output_json(ctx, "metrics.json", metrics);
  ctx.out << "PCA-" << (bc.kernel == baseline::Kernel::linear ? "LR" : "rbf") << " selected c = " << cv.selected
          << ", train MAE " << fmt(metrics["train"]["mae"].get<double>()) << "\n";
  return kExitOk;
}

int cmd_stability(Context& ctx) {
  const Dataset data = load_data(ctx);
  const auto& sc = ctx.cfg.stability;
  json all = json::array();
  std::string csv;
  for (auto family : sc.families) {
    const auto spec = config::stability_spec(ctx.cfg, family);
    const auto report = experiments::stability_experiment(data, spec);
    all.push_back(reports::to_json(report));
    const std::string part = reports::stability_csv(report);
    csv += csv.empty() ? part : part.substr(part.find('\n') + 1);

    std::vector<double> nominal, spread;
    for (const auto& t : report.trials) {
      nominal.push_back(t.nominal.mae_test);
      spread.push_back(experiments::grid_test_mae(t).sd);
    }
    ctx.out << experiments::to_string(family) << ": nominal test MAE "
            << fmt(experiments::summarize(nominal).mean) << ", mean grid sd "
            << fmt(experiments::summarize(spread).mean) << " over " << report.trials.size() << " trials\n";
  }
  output_json(ctx, "report.json", {{"stability", all}});
  output(ctx, "stability.csv", csv);
  return kExitOk;
}

int cmd_scaling(Context& ctx) {
  require(ctx.cfg.data.source == "gaussian", ErrorCode::invalid_argument,
          "scaling needs data.source = gaussian (the ensemble covariance)");
  const auto ensemble = config::ensemble_spec(ctx.cfg);
  const auto taps = config::scaling_taps(ctx.cfg);
  const auto report =
      experiments::scaling_law_experiment(ensemble, taps, ctx.cfg.scaling.n_grid, ctx.cfg.scaling.seeds, ctx.cfg.seed);
  json j = reports::to_json(report);
  j["taps"] = taps.values();
  output_json(ctx, "report.json", j);
  output(ctx, "scaling.csv", reports::scaling_csv(report));
  if (report.slope)
    ctx.out << "log-log slope " << fmt(*report.slope) << ", " << report.inversions << " inversions\n";
  else
    ctx.out << "filter error is identically zero\n";
  return kExitOk;
}

int cmd_lipschitz(Context& ctx) {
  auto sweep = ctx.cfg.lipschitz;
  sweep.seed = ctx.cfg.seed;
  const auto results = experiments::lipschitz_sweep(sweep);
  json cases = json::array();
  std::string csv = "case,layers,features,alpha,sample,lhs,lhs_sum,rhs,pass\n";
  int passed = 0;
  for (std::size_t c = 0; c < results.size(); ++c) {
    const auto& r = results[c];
    passed += r.pass;
    cases.push_back(reports::to_json(r));
    for (std::size_t s = 0; s < r.samples.size(); ++s) {
      const auto& x = r.samples[s];
      csv += std::to_string(c) + "," + std::to_string(r.layers) + "," + std::to_string(r.features) + "," +
             io::format_double(r.alpha) + "," + std::to_string(s) + "," + io::format_double(x.lhs) + "," +
             io::format_double(x.lhs_sum) + "," + io::format_double(x.rhs) + "," + (x.pass ? "1" : "0") + "\n";
    }
  }
  output_json(ctx, "report.json", {{"cases", cases}, {"passed", passed}});
  output(ctx, "lipschitz.csv", csv);
  ctx.out << "bound holds in " << passed << "/" << results.size() << " cases\n";
  return passed == static_cast<int>(results.size()) ? kExitOk : kExitCheck;
}

std::vector<std::size_t> resolution_indices(const std::vector<Index>& dims, const std::vector<Dataset>& sets,
                                            const char* key) {
  std::vector<std::size_t> idx;
  if (dims.empty()) {
    for (std::size_t i = 0; i < sets.size(); ++i) idx.push_back(i);
    return idx;
  }
  for (Index d : dims) {
    std::size_t i = 0;
    while (i < sets.size() && sets[i].dim() != d) ++i;
    require(i < sets.size(), ErrorCode::invalid_argument,
            std::string("experiment.transfer.") + key + ": no generated resolution with " + std::to_string(d) +
                " features");
    idx.push_back(i);
  }
  return idx;
}

int cmd_transfer(Context& ctx) {
  require(ctx.cfg.data.source == "multires", ErrorCode::invalid_argument, "transfer needs data.source = multires");
  auto mr = datagen::gen_multires(config::multires_spec(ctx.cfg));
  for (auto& d : mr.coarse) maybe_rescale(ctx, d);
  const auto& tc = ctx.cfg.transfer;
  experiments::TransferSpec spec;
  spec.train_resolutions = resolution_indices(tc.train_dims, mr.coarse, "train_dims");
  spec.eval_resolutions = resolution_indices(tc.eval_dims, mr.coarse, "eval_dims");
  spec.trials = tc.trials;
  spec.test_fraction = tc.test_fraction;
  spec.seed = ctx.cfg.seed;
  spec.architecture = ctx.cfg.model.layers;
  spec.cov_scale = ctx.cfg.model.cov_scale;
  spec.train = ctx.cfg.train;
  const auto report = experiments::transfer_experiment(mr.coarse, spec);
  output_json(ctx, "report.json", reports::to_json(report));
  output(ctx, "transfer_mae.csv", reports::transfer_csv(report, false));
  output(ctx, "transfer_pearson.csv", reports::transfer_csv(report, true));
  ctx.out << "test MAE (rows: train dim, cols: eval dim)\n" << reports::transfer_csv(report, false);
  return kExitOk;
}

// ---- dispatch ------------------------------------------------------------

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::schema: return kExitSchema;
    case ErrorCode::io: return kExitIo;
    default: return kExitRuntime;
  }
}

std::string code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::not_symmetric: return "not_symmetric";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::schema: return "schema";
    case ErrorCode::io: return "io";
  }
  return "error";
}

void apply_overrides(const Flags& f, config::RunConfig& cfg) {
  if (f.seed_set) cfg.seed = f.seed;
  if (!f.data.empty()) {
    cfg.data.source = "csv";
    cfg.data.path = f.data;
  }
  if (f.header_set) cfg.data.header = true;
  if (!f.target_col.empty()) cfg.data.target_col = f.target_col;
  if (!f.cov_scale.empty()) cfg.model.cov_scale = vnn::parse_cov_scale(f.cov_scale);
  if (!f.kernel.empty()) cfg.baseline.kernel = baseline::parse_kernel(f.kernel);
  if (!f.test.empty()) cfg.data.test_path = f.test;
}

int execute(const std::string& command, const Flags& flags, const std::vector<std::string>& args, std::ostream& out) {
  static const std::map<std::string, std::function<int(Context&)>> handlers{
      {"datagen", cmd_datagen},     {"fit", cmd_fit},         {"predict", cmd_predict},
      {"pca", cmd_pca},             {"baseline", cmd_baseline}, {"stability", cmd_stability},
      {"scaling", cmd_scaling},     {"lipschitz", cmd_lipschitz}, {"transfer", cmd_transfer}};

  kernels::apply_thread_limit_from_env();
  config::RunConfig cfg = flags.config.empty() ? config::RunConfig{} : config::load(flags.config);
  try {
    apply_overrides(flags, cfg);
  } catch (const Error& e) {
    fail(ErrorCode::schema, e.what());
  }
  fs::path out_dir = !flags.out.empty() ? flags.out : !cfg.out.empty() ? cfg.out : "covnet_out";
  fs::create_directories(out_dir);

  Context ctx{command, flags, cfg, out_dir, io::Manifest(command, args), out};
  if (!flags.config.empty()) ctx.manifest.add_input(flags.config);
  ctx.manifest.set_config(config::to_json(cfg));
  ctx.manifest.note("threads", kernels::thread_count());
  const int status = handlers.at(command)(ctx);
  ctx.manifest.note("exit_status", status);
  ctx.manifest.write(out_dir);
  return status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covariance-spectral filters, VNNs and stability experiments", "covnet"};
  app.require_subcommand(1, 1);
  Flags flags;

  struct Sub {
    const char* name;
    const char* help;
    bool data, cov_scale, model, cov, oracle, kernel;
  };
  const Sub subs[] = {
      {"datagen", "generate a synthetic dataset", false, false, false, false, false, false},
      {"fit", "train a VNN on a dataset", true, true, false, false, false, false},
      {"predict", "apply a trained VNN", true, false, true, true, false, false},
      {"pca", "PCA scores through the narrowband filterbank", true, false, false, false, true, false},
      {"baseline", "fit or apply a PCA-LR / PCA-rbf regressor", true, false, true, true, false, true},
      {"stability", "covariance-perturbation stability experiment", true, true, false, false, false, true},
      {"scaling", "filter error vs sample size", false, false, false, false, false, false},
      {"lipschitz", "check the VNN perturbation bound on seeded cases", false, false, false, false, false, false},
      {"transfer", "cross-resolution transfer experiment", false, true, false, false, false, false},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "global seed (overrides the config)")
        ->each([&](const std::string&) { flags.seed_set = true; });
    sub->add_option("--out", flags.out, "output directory");
    if (s.data) {
      sub->add_option("--data", flags.data, "input CSV (samples x features)");
      sub->add_flag("--header", flags.header_set, "CSV files start with a header row");
      sub->add_option("--target-col", flags.target_col, "last | none | PATH to a target column file");
    }
    if (s.cov_scale) sub->add_option("--cov-scale", flags.cov_scale, "none | spectral")
        ->check(CLI::IsMember({"none", "spectral"}));
    if (s.model) sub->add_option("--model", flags.model, "trained model JSON");
    if (s.cov) sub->add_option("--cov", flags.cov, "covariance CSV used instead of the data estimate");
    if (s.oracle) sub->add_flag("--oracle", flags.oracle, "compare against the direct eigenbasis projection");
    if (s.kernel) {
      sub->add_option("--kernel", flags.kernel, "linear | rbf")->check(CLI::IsMember({"linear", "rbf"}));
      if (std::string(s.name) == "baseline") sub->add_option("--test", flags.test, "held-out CSV to score");
    }
  }

  std::vector<const char*> argv{"covnet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, flags, args, out);
  } catch (const Error& e) {
    err << "covnet " << command << ": error[" << code_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "covnet " << command << ": error[schema]: " << e.what() << "\n";
    return kExitSchema;
  } catch (const fs::filesystem_error& e) {
    err << "covnet " << command << ": error[io]: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "covnet " << command << ": error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace covnet::cli
