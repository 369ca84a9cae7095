#include "covnet/reports.hpp"

#include "covnet/error.hpp"
#include "covnet/io.hpp"

#include <cmath>
#include <sstream>

namespace covnet::reports {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string metrics_row(const experiments::Metrics& m) {
  return io::format_double(m.mae_train) + "," + io::format_double(m.mae_test) + "," +
         io::format_double(m.pearson_train) + "," + io::format_double(m.pearson_test);
}

}  // namespace

json to_json(const experiments::Summary& s) {
  return {{"mean", num(s.mean)}, {"sd", num(s.sd)}, {"sem", num(s.sem)}, {"count", s.count}};
}

json to_json(const experiments::Metrics& m) {
  return {{"mae_train", num(m.mae_train)},
          {"mae_test", num(m.mae_test)},
          {"pearson_train", num(m.pearson_train)},
          {"pearson_test", num(m.pearson_test)}};
}

json to_json(const experiments::StabilityReport& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    json grid = json::array();
    for (const auto& g : t.grid) grid.push_back(to_json(g));
    trials.push_back({{"nominal", to_json(t.nominal)},
                      {"grid", grid},
                      {"components", t.components},
                      {"grid_test_mae", to_json(experiments::grid_test_mae(t))}});
  }
  json aggs = json::array();
  for (const auto& a : r.aggregates)
    aggs.push_back({{"n_prime", a.n_prime},
                    {"mae_train", to_json(a.mae_train)},
                    {"mae_test", to_json(a.mae_test)},
                    {"pearson_train", to_json(a.pearson_train)},
                    {"pearson_test", to_json(a.pearson_test)}});
  return {{"family", experiments::to_string(r.family)},
          {"seed", r.seed},
          {"nominal_n", r.nominal_n},
          {"grid", r.grid},
          {"trials", trials},
          {"aggregates", aggs}};
}

json to_json(const experiments::ScalingReport& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    json norms = json::array();
    for (double v : p.norms) norms.push_back(num(v));
    points.push_back({{"n", p.n}, {"median", num(p.median)}, {"norms", norms}});
  }
  return {{"points", points},
          {"slope", r.slope ? num(*r.slope) : json(nullptr)},
          {"constant_zero", r.constant_zero},
          {"inversions", r.inversions}};
}

json to_json(const experiments::LipschitzReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"lhs", num(s.lhs)},
                       {"lhs_sum", num(s.lhs_sum)},
                       {"rhs", num(s.rhs)},
                       {"readout_diff", num(s.readout_diff)},
                       {"pass", s.pass}});
  return {{"alpha", num(r.alpha)}, {"layers", r.layers}, {"features", r.features},
          {"samples", samples},    {"pass", r.pass}};
}

json to_json(const experiments::TransferReport& r) {
  json cells = json::array();
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < r.cells[i].size(); ++j) {
      const auto& c = r.cells[i][j];
      json trials = json::array();
      for (const auto& m : c.trials) trials.push_back(to_json(m));
      row.push_back({{"train_dim", r.train_dims[i]},
                     {"eval_dim", r.eval_dims[j]},
                     {"mae_test", to_json(c.mae_test)},
                     {"pearson_test", to_json(c.pearson_test)},
                     {"trials", trials}});
    }
    cells.push_back(row);
  }
  return {{"train_dims", r.train_dims}, {"eval_dims", r.eval_dims}, {"cells", cells}};
}

namespace {

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Matrix matrix_from(const json& j, Index cols_if_empty = 0) {
  require(j.is_array(), ErrorCode::schema, "baseline model: expected a matrix");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows ? static_cast<Index>(j[0].size()) : cols_if_empty;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Index>(row.size()) == cols, ErrorCode::schema,
            "baseline model: ragged matrix");
    for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Vector vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

json to_json(const baseline::PcaRegressor& reg) {
  json j = {{"schema_version", 1},
            {"kernel", baseline::to_string(reg.kernel())},
            {"n_components", reg.n_components},
            {"eigenvalues", vector_json(reg.eigen_basis.values)},
            {"eigenvectors", matrix_json(reg.eigen_basis.vectors)}};
  if (const auto* lin = std::get_if<baseline::LinearFit>(&reg.regressor)) {
    j["intercept"] = lin->intercept;
    j["weights"] = vector_json(lin->weights);
  } else {
    const auto& rbf = std::get<baseline::RbfFit>(reg.regressor);
    j["gamma"] = rbf.gamma;
    j["ridge"] = rbf.ridge;
    j["target_mean"] = rbf.target_mean;
    j["dual"] = vector_json(rbf.dual);
    j["train_scores"] = matrix_json(rbf.train_scores);
  }
  return j;
}

baseline::PcaRegressor regressor_from_json(const json& j) {
  try {
    require(j.value("schema_version", 0) == 1, ErrorCode::schema, "baseline model: unsupported schema_version");
    baseline::PcaRegressor reg;
    reg.n_components = j.at("n_components").get<Index>();
    reg.eigen_basis.values = vector_from(j.at("eigenvalues"));
    reg.eigen_basis.vectors = matrix_from(j.at("eigenvectors"));
    require(reg.eigen_basis.vectors.rows() == reg.eigen_basis.values.size() &&
                reg.eigen_basis.vectors.cols() == reg.eigen_basis.values.size(),
            ErrorCode::schema, "baseline model: eigenbasis shape mismatch");
    require(reg.n_components >= 1 && reg.n_components <= reg.eigen_basis.values.size(), ErrorCode::schema,
            "baseline model: n_components out of range");
    if (baseline::parse_kernel(j.at("kernel").get<std::string>()) == baseline::Kernel::linear) {
      baseline::LinearFit lin;
      lin.intercept = j.at("intercept").get<double>();
      lin.weights = vector_from(j.at("weights"));
      require(lin.weights.size() == reg.n_components, ErrorCode::schema, "baseline model: weight count mismatch");
      reg.regressor = lin;
    } else {
      baseline::RbfFit rbf;
      rbf.gamma = j.at("gamma").get<double>();
      rbf.ridge = j.at("ridge").get<double>();
      rbf.target_mean = j.at("target_mean").get<double>();
      rbf.dual = vector_from(j.at("dual"));
      rbf.train_scores = matrix_from(j.at("train_scores"), reg.n_components);
      require(rbf.train_scores.cols() == reg.n_components && rbf.train_scores.rows() == rbf.dual.size(),
              ErrorCode::schema, "baseline model: kernel model shape mismatch");
      reg.regressor = rbf;
    }
    return reg;
  } catch (const json::exception& e) {
    fail(ErrorCode::schema, std::string("baseline model: ") + e.what());
  }
}

std::string stability_csv(const experiments::StabilityReport& r) {
  std::ostringstream out;
  out << "family,trial,kind,n_prime,components,mae_train,mae_test,pearson_train,pearson_test\n";
  const std::string fam = experiments::to_string(r.family);
  for (std::size_t t = 0; t < r.trials.size(); ++t) {
    const auto& tr = r.trials[t];
    out << fam << ',' << t << ",nominal," << r.nominal_n << ',' << tr.components << ',' << metrics_row(tr.nominal)
        << '\n';
    for (std::size_t g = 0; g < tr.grid.size(); ++g)
      out << fam << ',' << t << ",perturbed," << r.grid[g] << ',' << tr.components << ','
          << metrics_row(tr.grid[g]) << '\n';
  }
  return out.str();
}

std::string scaling_csv(const experiments::ScalingReport& r) {
  std::ostringstream out;
  out << "n,seed,norm\n";
  for (const auto& p : r.points)
    for (std::size_t s = 0; s < p.norms.size(); ++s) out << p.n << ',' << s << ',' << io::format_double(p.norms[s]) << '\n';
  return out.str();
}

std::string transfer_csv(const experiments::TransferReport& r, bool pearson) {
  std::ostringstream out;
  out << "train_dim";
  for (Index e : r.eval_dims) out << ",eval_" << e;
  out << '\n';
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    out << r.train_dims[i];
    for (const auto& c : r.cells[i]) out << ',' << io::format_double(pearson ? c.pearson_test.mean : c.mae_test.mean);
    out << '\n';
  }
  return out.str();
}

}  // namespace covnet::reports
