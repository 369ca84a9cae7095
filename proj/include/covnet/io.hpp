#pragma once

// CSV datasets and matrices, whole-file helpers and run manifests.

#include "covnet/numcore.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace covnet::io {

namespace fs = std::filesystem;

struct CsvOptions {
  bool header = false;
  /// "last": final column is the target; "none": no target; anything else is
  /// a path to a one-column target file.
  std::string target_col = "last";
};

Dataset read_dataset(const fs::path& path, const CsvOptions& options);
void write_dataset(const fs::path& path, const Dataset& data, bool header = true);

Matrix read_matrix(const fs::path& path, bool header = false);
void write_matrix(const fs::path& path, const Matrix& m,
                  const std::vector<std::string>& header = {});

Vector read_vector(const fs::path& path, bool header = false);
void write_vector(const fs::path& path, const Vector& v, const std::string& header = "");

/// 17 significant digits.
std::string format_double(double v);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& content);

/// Records the command, argv, config echo and FNV-1a hashes of every input
/// and output file. Written as manifest.json in the output directory.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv);

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void add_input(const fs::path& path);
  void add_output(const fs::path& path);
  void note(const std::string& key, nlohmann::json value) { notes_[key] = std::move(value); }

  nlohmann::json to_json() const;
  void write(const fs::path& out_dir) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  nlohmann::json config_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
  nlohmann::json notes_ = nlohmann::json::object();
};

std::string file_hash(const fs::path& path);

}  // namespace covnet::io
