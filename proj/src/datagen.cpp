#include "covnet/datagen.hpp"

#include "covnet/error.hpp"
#include "covnet/rng.hpp"

#include <cmath>
#include <numbers>

namespace covnet::datagen {

namespace {

Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = rng.normal();
  return out;
}

Matrix thin_orthonormal(Index rows, Index cols, std::uint64_t seed) {
  const Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rows, cols, seed));
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

// Haar-distributed rotation: QR of a Gaussian matrix with R's diagonal made positive.
Matrix random_rotation(Index dim, std::uint64_t seed) {
  const Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(dim, dim, seed));
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

}  // namespace

void EnsembleSpec::validate() const {
  require(dim >= 1 && spectrum.size() == dim, ErrorCode::invalid_argument,
          "ensemble spectrum length must equal the dimension");
  for (Index i = 0; i < dim; ++i) {
    require(std::isfinite(spectrum[i]), ErrorCode::non_finite, "ensemble spectrum must be finite");
    require(spectrum[i] >= 0.0, ErrorCode::invalid_argument, "ensemble spectrum must be nonnegative");
    if (i > 0)
      require(spectrum[i] <= spectrum[i - 1], ErrorCode::invalid_argument, "ensemble spectrum must be nonincreasing");
  }
}

CovarianceModel EnsembleSpec::covariance() const {
  validate();
  const Matrix v = random_rotation(dim, rotation_seed);
  const Matrix c = v * spectrum.asDiagonal() * v.transpose();
  return CovarianceModel(0.5 * (c + c.transpose()));
}

Vector geometric_spectrum(Index dim, double ratio) {
  require(dim >= 1 && ratio > 0.0 && ratio <= 1.0, ErrorCode::invalid_argument,
          "geometric spectrum needs dim >= 1 and ratio in (0, 1]");
  Vector out(dim);
  double v = 1.0;
  for (Index i = 0; i < dim; ++i, v *= ratio) out[i] = v;
  return out;
}

double friedman1_response(const Vector& x) {
  require(x.size() >= 5, ErrorCode::invalid_argument, "friedman1 needs at least 5 features");
  return 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] +
         5.0 * x[4];
}

Dataset gen_friedman1(Index n, Index m, double noise_sd, std::uint64_t seed) {
  require(m >= 5, ErrorCode::invalid_argument, "friedman1 needs at least 5 features");
  require(n >= 1, ErrorCode::invalid_argument, "friedman1 needs at least one sample");
  require(noise_sd >= 0.0, ErrorCode::invalid_argument, "noise_sd must be nonnegative");
  Rng feature_rng(derive_seed(seed, 1));
  Rng noise_rng(derive_seed(seed, 2));
  Dataset d;
  d.features.resize(n, m);
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) d.features(i, j) = feature_rng.uniform();
    y[i] = friedman1_response(d.features.row(i).transpose()) + noise_sd * noise_rng.normal();
  }
  d.targets = std::move(y);
  return d;
}

void LowRankSpec::validate() const {
  require(samples >= 1 && dim >= 1, ErrorCode::invalid_argument, "lowrank: samples and dim must be >= 1");
  require(n_informative >= 1 && n_informative <= dim, ErrorCode::invalid_argument,
          "lowrank: n_informative must be in [1, dim]");
  require(effective_rank > 0.0 && effective_rank <= static_cast<double>(dim), ErrorCode::invalid_argument,
          "lowrank: effective_rank must be in (0, dim]");
  require(tail_strength >= 0.0 && tail_strength <= 1.0, ErrorCode::invalid_argument,
          "lowrank: tail_strength must be in [0, 1]");
  require(noise_sd >= 0.0, ErrorCode::invalid_argument, "lowrank: noise_sd must be nonnegative");
}

Vector lowrank_profile(Index count, double effective_rank, double tail_strength) {
  Vector s(count);
  for (Index i = 0; i < count; ++i) {
    const double r = static_cast<double>(i) / effective_rank;
    s[i] = (1.0 - tail_strength) * std::exp(-r * r) + tail_strength * std::exp(-0.1 * r);
  }
  return s;
}

Dataset gen_lowrank_regression(const LowRankSpec& spec) {
  spec.validate();
  const Index k = std::min(spec.samples, spec.dim);
  const Matrix u = thin_orthonormal(spec.samples, k, derive_seed(spec.seed, 1));
  const Matrix v = thin_orthonormal(spec.dim, k, derive_seed(spec.seed, 2));
  const Vector s = lowrank_profile(k, spec.effective_rank, spec.tail_strength);

  Dataset d;
  d.features = u * s.asDiagonal() * v.transpose();
  Rng weight_rng(derive_seed(spec.seed, 3));
  Vector w(spec.n_informative);
  for (Index i = 0; i < w.size(); ++i) w[i] = 100.0 * weight_rng.uniform();
  Rng noise_rng(derive_seed(spec.seed, 4));
  Vector y = d.features.leftCols(spec.n_informative) * w;
  for (Index i = 0; i < y.size(); ++i) y[i] += spec.noise_sd * noise_rng.normal();
  d.targets = std::move(y);
  return d;
}

EnsembleSample gen_gaussian_ensemble(const EnsembleSpec& spec, Index n, std::uint64_t seed) {
  spec.validate();
  require(n >= 1, ErrorCode::invalid_argument, "gaussian ensemble needs n >= 1");
  const Matrix v = random_rotation(spec.dim, spec.rotation_seed);
  const Matrix c = v * spec.spectrum.asDiagonal() * v.transpose();
  const Matrix root = v * spec.spectrum.cwiseSqrt().asDiagonal() * v.transpose();
  Dataset d;
  d.features = gaussian_matrix(n, spec.dim, seed) * root.transpose();
  return {std::move(d), CovarianceModel(0.5 * (c + c.transpose()))};
}

void MultiResSpec::validate() const {
  require(fine_dim >= 1 && samples >= 1 && latent_dim >= 2, ErrorCode::invalid_argument,
          "multires: fine_dim, samples must be >= 1 and latent_dim >= 2");
  require(regions >= 1 && regions <= fine_dim, ErrorCode::invalid_argument,
          "multires: regions must be in [1, fine_dim]");
  require(!resolutions.empty(), ErrorCode::invalid_argument, "multires: no resolutions");
  for (Index r : resolutions)
    require(r >= 1 && r <= fine_dim, ErrorCode::invalid_argument,
            "multires: resolution " + std::to_string(r) + " is not a partition of " + std::to_string(fine_dim) +
                " features");
  require(noise_sd >= 0.0 && target_noise_sd >= 0.0, ErrorCode::invalid_argument,
          "multires: noise levels must be nonnegative");
}

std::vector<Index> block_bounds(Index fine_dim, Index blocks) {
  require(blocks >= 1 && blocks <= fine_dim, ErrorCode::invalid_argument, "block partition out of range");
  std::vector<Index> b(static_cast<std::size_t>(blocks) + 1);
  for (Index j = 0; j <= blocks; ++j) b[j] = j * fine_dim / blocks;
  return b;
}

Matrix block_means(const Matrix& fine, Index blocks) {
  const auto bounds = block_bounds(fine.cols(), blocks);
  Matrix out(fine.rows(), blocks);
  for (Index j = 0; j < blocks; ++j) {
    const Index width = bounds[j + 1] - bounds[j];
    // Mean as offsets from the first member: equal members average exactly.
    const Vector first = fine.col(bounds[j]);
    const Matrix offsets = fine.middleCols(bounds[j], width).colwise() - first;
    out.col(j) = first + offsets.rowwise().sum() / static_cast<double>(width);
  }
  return out;
}

MultiResData gen_multires(const MultiResSpec& spec) {
  spec.validate();
  const Index n = spec.samples;
  const Index k = spec.latent_dim;

  MultiResData out;
  out.latent = gaussian_matrix(n, k, derive_seed(spec.seed, 1));

  // Factor 0 loads positively everywhere, factor 1 with a weaker positive
  // mean, the rest are zero-mean patterns.
  Rng loading_rng(derive_seed(spec.seed, 2));
  Matrix region_loading(spec.regions, k);
  for (Index r = 0; r < spec.regions; ++r)
    for (Index f = 0; f < k; ++f) {
      const double base = f == 0 ? 1.0 : (f == 1 ? 0.5 : 0.0);
      const double spread = f == 0 ? 0.25 : 0.5;
      region_loading(r, f) = base + spread * loading_rng.normal();
    }

  Matrix loading(spec.fine_dim, k);
  Rng jitter_rng(derive_seed(spec.seed, 3));
  for (Index j = 0; j < spec.fine_dim; ++j) {
    loading.row(j) = region_loading.row(j * spec.regions / spec.fine_dim);
    if (!spec.block_constant)
      for (Index f = 0; f < k; ++f) loading(j, f) += 0.1 * jitter_rng.normal();
  }

  out.fine.features = out.latent * loading.transpose();
  if (spec.noise_sd > 0.0) out.fine.features += spec.noise_sd * gaussian_matrix(n, spec.fine_dim, derive_seed(spec.seed, 4));

  Rng target_rng(derive_seed(spec.seed, 5));
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    const double z0 = out.latent(i, 0);
    const double z1 = out.latent(i, 1);
    y[i] = 2.0 * z0 + z1 + 0.5 * z0 * z0 + spec.target_noise_sd * target_rng.normal();
  }
  out.fine.targets = y;

  for (Index r : spec.resolutions) {
    Dataset d;
    d.features = block_means(out.fine.features, r);
    d.targets = y;
    out.coarse.push_back(std::move(d));
  }
  return out;
}

KurtosisReport kurtosis_factor(const CovarianceModel& ensemble, Index n_mc, std::uint64_t seed) {
  require(n_mc >= 10000, ErrorCode::invalid_argument, "kurtosis_factor needs n_mc >= 1e4");
  const EigenSystem& eig = ensemble.eigen();
  const Index m = eig.dim();
  const double top = std::max(eig.values[0], 0.0);
  const double tol = 1e-12 * std::max(1.0, top);

  const Vector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  const Matrix z = gaussian_matrix(n_mc, m, seed);
  const Matrix x = z * root.asDiagonal() * eig.vectors.transpose();  // rows ~ N(0, C)
  const Matrix proj = x * eig.vectors;                                // x·v_i
  const Vector norm2 = x.rowwise().squaredNorm();

  KurtosisReport rep;
  rep.eigenvalues = eig.values;
  rep.k.resize(m);
  for (Index i = 0; i < m; ++i) {
    const double second = (proj.col(i).array().square() * norm2.array()).mean();
    rep.k[i] = std::sqrt(std::max(0.0, second - eig.values[i] * eig.values[i]));
  }

  rep.k_min = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < m; ++i)
    if (eig.values[i] > tol) rep.k_min = std::min(rep.k_min, rep.k[i]);

  bool any_pair = false;
  rep.kappa = 0.0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const double gap = std::abs(eig.values[i] - eig.values[j]);
      if (i == j || gap <= tol) continue;
      any_pair = true;
      rep.kappa = std::max(rep.kappa, rep.k[i] * rep.k[i] / gap);
    }
  require(any_pair, ErrorCode::numerical, "kurtosis_factor: all eigenvalues are equal, kappa is undefined");
  return rep;
}

}  // namespace covnet::datagen
