#include "covnet/config.hpp"
#include "covnet/error.hpp"
#include "covnet/io.hpp"

#include "../support/helpers.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>

using namespace covnet;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("covnet_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("doubles round-trip through CSV") {
  const fs::path dir = scratch("csv");
  Dataset d;
  d.features = testing::gaussian(7, 3, 1) * 1e-7;
  d.features(0, 0) = 1.0 / 3.0;
  d.features(1, 1) = -0.0;
  d.features(2, 2) = 1e300;
  d.targets = testing::gaussian_vec(7, 2);
  io::write_dataset(dir / "d.csv", d);
  const Dataset back = io::read_dataset(dir / "d.csv", {true, "last"});
  CHECK(back.features == d.features);
  CHECK(*back.targets == *d.targets);

  const Dataset no_y = io::read_dataset(dir / "d.csv", {true, "none"});
  CHECK(no_y.features.cols() == 4);
  CHECK_FALSE(no_y.has_targets());

  io::write_vector(dir / "y.csv", *d.targets);
  io::write_dataset(dir / "x.csv", Dataset{d.features, std::nullopt}, false);
  const Dataset sep = io::read_dataset(dir / "x.csv", {false, (dir / "y.csv").string()});
  CHECK(*sep.targets == *d.targets);

  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV errors name file and line") {
  const fs::path dir = scratch("csv_err");
  io::write_file(dir / "bad.csv", "1,2,3\n4,x,6\n");
  try {
    io::read_matrix(dir / "bad.csv");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
    CHECK(std::string(e.what()).find("bad.csv:2") != std::string::npos);
  }
  io::write_file(dir / "ragged.csv", "1,2,3\n4,5\n");
  CHECK(code_of([&] { io::read_matrix(dir / "ragged.csv"); }) == ErrorCode::io);
  CHECK(code_of([&] { io::read_matrix(dir / "missing.csv"); }) == ErrorCode::io);
  io::write_file(dir / "y.csv", "1\n2\n");
  io::write_file(dir / "x.csv", "1,2\n3,4\n5,6\n");
  CHECK_THROWS_AS(io::read_dataset(dir / "x.csv", {false, (dir / "y.csv").string()}), Error);
}

TEST_CASE("manifest records hashes") {
  const fs::path dir = scratch("manifest");
  io::write_file(dir / "in.txt", "abc");
  io::Manifest m("fit", {"fit", "--seed", "1"});
  m.set_config({{"seed", 1}});
  m.add_input(dir / "in.txt");
  m.note("threads", 1);
  m.write(dir);
  const auto j = nlohmann::json::parse(io::read_file(dir / "manifest.json"));
  CHECK(j["command"] == "fit");
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["inputs"][0]["hash"] == io::file_hash(dir / "in.txt"));
  // FNV-1a 64 of "abc".
  CHECK(io::file_hash(dir / "in.txt") == "fnv1a64:e71fa2190541574b");
}

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const auto cfg = config::parse(nlohmann::json::object());
    CHECK(cfg.train.learning_rate == 0.0151);
    CHECK(cfg.model.layers.size() == 2);
    CHECK(cfg.model.layers[0].f_out == 13);
    CHECK(cfg.stability.grid.back() == 899);
  }
  SUBCASE("values are read") {
    const auto cfg = config::parse(nlohmann::json::parse(R"({
      "seed": 12, "train": {"epochs": 3, "optimizer": "sgd"},
      "model": {"cov_scale": "spectral", "layers": [{"f_out": 4, "taps": 3, "activation": "tanh"}]},
      "experiment": {"stability": {"families": ["pca_rbf"], "trials": 2}}
    })"));
    CHECK(cfg.seed == 12);
    CHECK(cfg.train.epochs == 3);
    CHECK(cfg.train.optimizer == vnn::Optimizer::sgd);
    CHECK(cfg.model.cov_scale == vnn::CovScale::spectral);
    CHECK(cfg.model.layers[0].activation == vnn::Activation::tanh);
    CHECK(cfg.stability.families == std::vector{experiments::Family::pca_rbf});
  }
  SUBCASE("unknown keys are rejected by path") {
    try {
      config::parse(nlohmann::json::parse(R"({"train": {"learning_rte": 0.1}})"));
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::schema);
      CHECK(std::string(e.what()).find("train.learning_rte") != std::string::npos);
    }
    CHECK(code_of([] { config::parse(nlohmann::json::parse(R"({"bogus": 1})")); }) == ErrorCode::schema);
  }
  SUBCASE("type and value errors") {
    CHECK(code_of([] { config::parse(nlohmann::json::parse(R"({"seed": "x"})")); }) == ErrorCode::schema);
    CHECK(code_of([] { config::parse(nlohmann::json::parse(R"({"schema_version": 2})")); }) == ErrorCode::schema);
    CHECK(code_of([] { config::parse(nlohmann::json::parse(R"({"train": {"epochs": 0}})")); }) ==
          ErrorCode::schema);
  }
  SUBCASE("echo re-parses to the same config") {
    const auto cfg = config::load(fs::path(COVNET_SOURCE_DIR) / "configs/abc.json");
    const auto echo = config::to_json(cfg);
    CHECK(config::to_json(config::parse(echo)) == echo);
  }
}

TEST_CASE("shipped presets load") {
  for (const auto& entry : fs::directory_iterator(fs::path(COVNET_SOURCE_DIR) / "configs")) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(config::load(entry.path()));
  }
}
