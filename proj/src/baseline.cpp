#include "covnet/baseline.hpp"

#include "covnet/error.hpp"
#include "covnet/kernels.hpp"
#include "covnet/parallel.hpp"
#include "covnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace covnet::baseline {

namespace {

void check_components(const EigenSystem& eigen, Index c) {
  require(c >= 1 && c <= eigen.dim(), ErrorCode::invalid_argument,
          "component count " + std::to_string(c) + " outside [1, " + std::to_string(eigen.dim()) + "]");
}

LinearFit fit_linear_scores(const Matrix& scores, const Vector& y, double jitter) {
  const Index n = scores.rows();
  const Eigen::RowVectorXd s_mean = scores.colwise().sum() / static_cast<double>(n);
  const double y_mean = y.sum() / static_cast<double>(n);
  const Matrix sc = scores.rowwise() - s_mean;
  const Vector yc = y.array() - y_mean;

  Matrix gram = sc.transpose() * sc;
  gram.diagonal().array() += jitter;
  const Vector rhs = sc.transpose() * yc;

  LinearFit fit;
  Eigen::LDLT<Matrix> ldlt(gram);
  const auto& d = ldlt.vectorD();
  const bool degenerate = ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
                          d.minCoeff() <= 1e-14 * std::max(1.0, d.maxCoeff());
  if (degenerate) {
    std::cerr << "warning: PCA-LR design is rank deficient; using the minimum-norm solution\n";
    fit.weights = sc.completeOrthogonalDecomposition().solve(yc);
  } else {
    fit.weights = ldlt.solve(rhs);
  }
  fit.intercept = y_mean - s_mean.dot(fit.weights);
  return fit;
}

Vector predict_linear(const LinearFit& fit, const Matrix& scores) {
  return (scores * fit.weights).array() + fit.intercept;
}

RbfFit fit_rbf_scores(const Matrix& scores, const Vector& y, double gamma, double ridge) {
  require(gamma > 0.0 && ridge > 0.0, ErrorCode::invalid_argument, "rbf: gamma and ridge must be positive");
  RbfFit fit;
  fit.gamma = gamma;
  fit.ridge = ridge;
  fit.target_mean = y.sum() / static_cast<double>(y.size());
  fit.train_scores = scores;
  Matrix k = kernels::rbf_gram(scores, scores, gamma);
  k.diagonal().array() += ridge;
  Eigen::LLT<Matrix> llt(k);
  require(llt.info() == Eigen::Success, ErrorCode::numerical, "rbf: kernel system is singular");
  fit.dual = llt.solve((y.array() - fit.target_mean).matrix());
  require(fit.dual.allFinite(), ErrorCode::numerical, "rbf: kernel system is singular");
  return fit;
}

Vector predict_rbf(const RbfFit& fit, const Matrix& scores) {
  return (kernels::rbf_gram(scores, fit.train_scores, fit.gamma) * fit.dual).array() + fit.target_mean;
}

Vector predict_scores(const PcaRegressor& reg, const Matrix& scores) {
  if (const auto* lin = std::get_if<LinearFit>(&reg.regressor)) return predict_linear(*lin, scores);
  return predict_rbf(std::get<RbfFit>(reg.regressor), scores);
}

double score_variance(const Matrix& scores) {
  const double mean = scores.mean();
  return (scores.array() - mean).square().mean();
}

Matrix basis_for(const EigenSystem& eigen_new, const PcaRegressor& reg, bool align) {
  require(eigen_new.dim() == reg.eigen_basis.dim(), ErrorCode::dimension_mismatch,
          "reproject_with: eigenbasis dimension differs from the regressor's");
  Matrix basis = eigen_new.vectors.leftCols(reg.n_components);
  if (align) {
    for (Index i = 0; i < reg.n_components; ++i)
      if (basis.col(i).dot(reg.eigen_basis.vectors.col(i)) < 0.0) basis.col(i) *= -1.0;
  }
  return basis;
}

}  // namespace

std::string to_string(Kernel k) { return k == Kernel::linear ? "linear" : "rbf"; }

Kernel parse_kernel(std::string_view name) {
  if (name == "linear") return Kernel::linear;
  if (name == "rbf") return Kernel::rbf;
  fail(ErrorCode::schema, "unknown kernel '" + std::string(name) + "'");
}

Kernel PcaRegressor::kernel() const {
  return std::holds_alternative<LinearFit>(regressor) ? Kernel::linear : Kernel::rbf;
}

Vector PcaRegressor::predict(const Matrix& features) const {
  return reproject_with(eigen_basis, *this, features);
}

Vector pca_transform_topk(const EigenSystem& eigen, const Vector& x, Index c) {
  check_components(eigen, c);
  require(x.size() == eigen.dim(), ErrorCode::dimension_mismatch, "pca_transform_topk: dimension mismatch");
  return eigen.vectors.leftCols(c).transpose() * x;
}

Matrix pca_scores(const EigenSystem& eigen, const Matrix& features, Index c) {
  check_components(eigen, c);
  require(features.cols() == eigen.dim(), ErrorCode::dimension_mismatch, "pca_scores: dimension mismatch");
  return features * eigen.vectors.leftCols(c);
}

PcaRegressor fit_pca_linear(const Dataset& data, const EigenSystem& eigen, Index c, double jitter) {
  data.validate();
  require(data.has_targets(), ErrorCode::invalid_argument, "fit_pca_linear: dataset has no targets");
  PcaRegressor reg{eigen, c, fit_linear_scores(pca_scores(eigen, data.features, c), *data.targets, jitter)};
  return reg;
}

PcaRegressor fit_pca_rbf(const Dataset& data, const EigenSystem& eigen, Index c, double gamma, double ridge) {
  data.validate();
  require(data.has_targets(), ErrorCode::invalid_argument, "fit_pca_rbf: dataset has no targets");
  PcaRegressor reg{eigen, c, fit_rbf_scores(pca_scores(eigen, data.features, c), *data.targets, gamma, ridge)};
  return reg;
}

double default_gamma(const Dataset& data, const EigenSystem& eigen, Index c) {
  const double var = score_variance(pca_scores(eigen, data.features, c));
  require(var > 0.0, ErrorCode::numerical, "default_gamma: scores have zero variance");
  return 1.0 / (static_cast<double>(c) * var);
}

std::vector<Index> default_candidates(Index dim, Index samples) {
  std::vector<Index> out;
  for (Index c : {Index{1}, Index{2}, Index{5}, Index{10}, Index{20}, Index{50}, std::min(dim, samples - 1)})
    if (c >= 1 && c <= dim) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CvResult cv_select_components(const Dataset& data, const EigenSystem& eigen, std::span<const Index> candidates,
                              Kernel kernel, const CvOptions& options) {
  data.validate();
  require(data.has_targets(), ErrorCode::invalid_argument, "cv_select_components: dataset has no targets");
  require(options.folds >= 2 && options.repeats >= 1, ErrorCode::invalid_argument,
          "cv_select_components: need >= 2 folds and >= 1 repeat");
  const Index n = data.samples();
  require(n >= options.folds, ErrorCode::invalid_argument,
          "cv_select_components: " + std::to_string(n) + " samples < " + std::to_string(options.folds) + " folds");

  CvResult result;
  for (Index c : candidates)
    if (c >= 1 && c <= eigen.dim()) result.candidates.push_back(c);
  std::sort(result.candidates.begin(), result.candidates.end());
  result.candidates.erase(std::unique(result.candidates.begin(), result.candidates.end()), result.candidates.end());
  require(!result.candidates.empty(), ErrorCode::invalid_argument, "cv_select_components: no valid candidates");

  const Index max_c = result.candidates.back();
  const Matrix all_scores = pca_scores(eigen, data.features, max_c);
  const Vector& y = *data.targets;
  const std::size_t n_cand = result.candidates.size();

  std::vector<double> gammas(n_cand, options.gamma);
  if (kernel == Kernel::rbf && options.gamma <= 0.0)
    for (std::size_t ci = 0; ci < n_cand; ++ci) {
      const Index c = result.candidates[ci];
      gammas[ci] = 1.0 / (static_cast<double>(c) * score_variance(all_scores.leftCols(c)));
    }

  std::vector<std::vector<long>> orders;
  for (int r = 0; r < options.repeats; ++r) orders.push_back(Rng(derive_seed(options.seed, r)).permutation(n));

  const int jobs = options.repeats * options.folds;
  std::vector<double> mse(static_cast<std::size_t>(jobs) * n_cand, 0.0);
  parallel_for(jobs, [&](long job) {
    const int r = static_cast<int>(job / options.folds);
    const int f = static_cast<int>(job % options.folds);
    const Index lo = static_cast<Index>(f) * n / options.folds;
    const Index hi = static_cast<Index>(f + 1) * n / options.folds;
    std::vector<Index> tr, va;
    for (Index i = 0; i < n; ++i) (i >= lo && i < hi ? va : tr).push_back(orders[r][i]);
    Matrix s_tr(static_cast<Index>(tr.size()), max_c), s_va(static_cast<Index>(va.size()), max_c);
    Vector y_tr(static_cast<Index>(tr.size())), y_va(static_cast<Index>(va.size()));
    for (std::size_t i = 0; i < tr.size(); ++i) {
      s_tr.row(i) = all_scores.row(tr[i]);
      y_tr[i] = y[tr[i]];
    }
    for (std::size_t i = 0; i < va.size(); ++i) {
      s_va.row(i) = all_scores.row(va[i]);
      y_va[i] = y[va[i]];
    }
    for (std::size_t ci = 0; ci < n_cand; ++ci) {
      const Index c = result.candidates[ci];
      Vector pred;
      if (kernel == Kernel::linear) {
        pred = predict_linear(fit_linear_scores(s_tr.leftCols(c), y_tr, options.jitter), s_va.leftCols(c));
      } else {
        pred = predict_rbf(fit_rbf_scores(s_tr.leftCols(c), y_tr, gammas[ci], options.ridge), s_va.leftCols(c));
      }
      mse[static_cast<std::size_t>(job) * n_cand + ci] = (pred - y_va).squaredNorm() / static_cast<double>(va.size());
    }
  });

  result.mean_mse.assign(n_cand, 0.0);
  for (int job = 0; job < jobs; ++job)
    for (std::size_t ci = 0; ci < n_cand; ++ci) result.mean_mse[ci] += mse[static_cast<std::size_t>(job) * n_cand + ci];
  for (double& v : result.mean_mse) v /= static_cast<double>(jobs);

  std::size_t best = 0;
  for (std::size_t ci = 1; ci < n_cand; ++ci)
    if (result.mean_mse[ci] < result.mean_mse[best]) best = ci;
  result.selected = result.candidates[best];
  return result;
}

double reproject_with(const EigenSystem& eigen_new, const PcaRegressor& reg, const Vector& x, bool align) {
  require(x.size() == eigen_new.dim(), ErrorCode::dimension_mismatch, "reproject_with: dimension mismatch");
  const Matrix scores = x.transpose() * basis_for(eigen_new, reg, align);
  return predict_scores(reg, scores)[0];
}

Vector reproject_with(const EigenSystem& eigen_new, const PcaRegressor& reg, const Matrix& features, bool align) {
  require(features.cols() == eigen_new.dim(), ErrorCode::dimension_mismatch, "reproject_with: dimension mismatch");
  return predict_scores(reg, features * basis_for(eigen_new, reg, align));
}

}  // namespace covnet::baseline
