#include "covnet/io.hpp"

#include "covnet/error.hpp"
#include "covnet/hash.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace covnet::io {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, const fs::path& path, std::size_t line, std::size_t col) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    fail(ErrorCode::io, path.string() + ":" + std::to_string(line) + ": column " +
                            std::to_string(col + 1) + ": not a number: '" + s + "'");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table read_table(const fs::path& path, bool header) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  Table t;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_line(trim(line));
    if (header && lineno == 1) {
      for (auto& c : cells) t.header.push_back(trim(c));
      width = cells.size();
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width)
      fail(ErrorCode::io, path.string() + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) row[j] = parse_cell(cells[j], path, lineno, j);
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) fail(ErrorCode::io, path.string() + ": no data rows");
  return t;
}

Matrix to_matrix(const Table& t) {
  Matrix m(static_cast<Index>(t.rows.size()), static_cast<Index>(t.rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Dataset read_dataset(const fs::path& path, const CsvOptions& options) {
  const Table t = read_table(path, options.header);
  Matrix all = to_matrix(t);
  Dataset d;
  std::vector<std::string> names = t.header;
  if (options.target_col == "last") {
    require(all.cols() >= 2, ErrorCode::io, path.string() + ": target_col=last needs at least 2 columns");
    d.features = all.leftCols(all.cols() - 1);
    d.targets = all.col(all.cols() - 1);
    if (!names.empty()) names.pop_back();
  } else if (options.target_col == "none" || options.target_col.empty()) {
    d.features = std::move(all);
  } else {
    d.features = std::move(all);
    const Vector y = read_vector(options.target_col, options.header);
    require(y.size() == d.features.rows(), ErrorCode::io,
            options.target_col + ": " + std::to_string(y.size()) + " targets for " +
                std::to_string(d.features.rows()) + " samples");
    d.targets = y;
  }
  if (names.empty())
    for (Index j = 0; j < d.features.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
  d.feature_names = std::move(names);
  d.validate();
  return d;
}

void write_dataset(const fs::path& path, const Dataset& data, bool header) {
  auto out = open_out(path);
  if (header) {
    for (Index j = 0; j < data.dim(); ++j) {
      if (j) out << ',';
      out << (static_cast<std::size_t>(j) < data.feature_names.size() ? data.feature_names[static_cast<std::size_t>(j)]
                                                                     : "x" + std::to_string(j + 1));
    }
    if (data.has_targets()) out << ",y";
    out << '\n';
  }
  for (Index i = 0; i < data.samples(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) {
      if (j) out << ',';
      out << format_double(data.features(i, j));
    }
    if (data.has_targets()) out << ',' << format_double((*data.targets)(i));
    out << '\n';
  }
  if (!out) fail(ErrorCode::io, "write failed: " + path.string());
}

Matrix read_matrix(const fs::path& path, bool header) { return to_matrix(read_table(path, header)); }

void write_matrix(const fs::path& path, const Matrix& m, const std::vector<std::string>& header) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  if (!header.empty()) out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::io, "write failed: " + path.string());
}

Vector read_vector(const fs::path& path, bool header) {
  const Matrix m = read_matrix(path, header);
  require(m.cols() == 1, ErrorCode::io, path.string() + ": expected a single column");
  return m.col(0);
}

void write_vector(const fs::path& path, const Vector& v, const std::string& header) {
  write_matrix(path, v, header.empty() ? std::vector<std::string>{} : std::vector<std::string>{header});
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  if (!out) fail(ErrorCode::io, "write failed: " + path.string());
}

std::string file_hash(const fs::path& path) { return "fnv1a64:" + hex64(fnv1a64(read_file(path))); }

Manifest::Manifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)) {}

void Manifest::add_input(const fs::path& path) {
  inputs_.push_back({{"path", path.string()}, {"hash", file_hash(path)}});
}

void Manifest::add_output(const fs::path& path) {
  outputs_.push_back({{"path", path.filename().string()}, {"hash", file_hash(path)}});
}

nlohmann::json Manifest::to_json() const {
  return {{"tool", "covnet"},    {"command", command_}, {"argv", argv_},   {"config", config_},
          {"inputs", inputs_},   {"outputs", outputs_}, {"notes", notes_}};
}

void Manifest::write(const fs::path& out_dir) const { write_file(out_dir / "manifest.json", to_json().dump(2) + "\n"); }

}  // namespace covnet::io
