#include "hypbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "hypbo/errors.hpp"
#include "hypbo/kernels.hpp"
#include "hypbo/optim.hpp"

namespace hypbo {

namespace {

constexpr double kFirstJitter = 1e-10;
constexpr double kMaxJitter = 1e-4;
constexpr double kRestartSpread = 2.0;

Eigen::MatrixXd scale_columns(const Eigen::MatrixXd& pts, const Eigen::VectorXd& lengthscales) {
  return pts.array().colwise() / lengthscales.array();
}

/// Cholesky of K + (noise + jitter) I with escalating jitter. Returns the
/// jitter used, or a negative value on failure.
double factor_with_jitter(const Eigen::MatrixXd& k, double noise, Eigen::MatrixXd& chol) {
  const Eigen::Index n = k.rows();
  double jitter = 0.0;
  while (true) {
    Eigen::MatrixXd a = k;
    a.diagonal().array() += noise + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      chol = llt.matrixL();
      if (chol.diagonal().allFinite() && (chol.diagonal().array() > 0.0).all()) return jitter;
    }
    if (n == 0) return 0.0;
    jitter = jitter == 0.0 ? kFirstJitter : jitter * 10.0;
    if (jitter > kMaxJitter * 1.0000001) return -1.0;
  }
}

}  // namespace

KernelParams KernelParams::uniform(int dim, double lengthscale, double noise) {
  KernelParams p;
  p.signal_variance = 1.0;
  p.lengthscales = Eigen::VectorXd::Constant(dim, lengthscale);
  p.noise_variance = noise;
  return p;
}

void KernelParams::validate(int dim) const {
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw InvalidArgument("kernel: signal_variance must be positive");
  }
  if (lengthscales.size() != dim) {
    throw InvalidArgument("kernel: expected " + std::to_string(dim) + " lengthscales, got " +
                          std::to_string(lengthscales.size()));
  }
  if (!lengthscales.allFinite() || (lengthscales.array() <= 0.0).any()) {
    throw InvalidArgument("kernel: lengthscales must be positive");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InvalidArgument("kernel: noise_variance must be nonnegative");
  }
}

double matern52(const Point& x, const Point& z, const KernelParams& params) {
  if (x.size() != z.size() || x.size() != params.lengthscales.size()) {
    throw InvalidArgument("matern52: dimension mismatch");
  }
  const double r = ((x - z).array() / params.lengthscales.array()).matrix().norm();
  return kernels::matern52_of_distance(r, params.signal_variance);
}

// Keeps the per-parameter-set work (scaling, factorization) separate from the
// per-dataset setup so the hyperparameter search can reuse one model.
class GPWorkspace {
 public:
  static bool factorize(GPModel& m, Eigen::MatrixXd& scaled_train, const KernelParams& p);
};

GPModel GPModel::prior(int dim, KernelParams params, std::optional<SearchSpace> input_space) {
  params.validate(dim);
  if (input_space && input_space->dim() != dim) throw InvalidArgument("gp: input space dimension mismatch");
  GPModel m;
  m.dim_ = dim;
  m.input_space_ = std::move(input_space);
  m.train_.resize(dim, 0);
  m.targets_.resize(0);
  m.params_ = std::move(params);
  m.chol_.resize(0, 0);
  m.alpha_.resize(0);
  return m;
}

Eigen::MatrixXd GPModel::to_kernel_space(std::span<const Point> xs) const {
  Eigen::MatrixXd out(dim_, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].size() != dim_) throw InvalidArgument("gp: point dimension mismatch");
    out.col(static_cast<Eigen::Index>(j)) = input_space_ ? input_space_->to_unit(xs[j]) : xs[j];
  }
  return out;
}

GPModel GPModel::condition(const Dataset& data, KernelParams params, const GPFitOptions& options) {
  if (data.empty()) throw InvalidData("gp: empty dataset");
  for (double y : data.ys()) {
    if (!std::isfinite(y)) throw InvalidData("gp: non-finite target");
  }
  const int dim = data.dim();
  params.validate(dim);
  if (options.input_space && options.input_space->dim() != dim) {
    throw InvalidArgument("gp: input space dimension mismatch");
  }

  GPModel m;
  m.dim_ = dim;
  m.input_space_ = options.input_space;
  m.train_ = m.to_kernel_space(data.xs());
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(data.ys().data(), n);
  if (options.standardize_targets) {
    m.y_offset_ = y.mean();
    if (n >= 2) {
      const double sd = std::sqrt((y.array() - m.y_offset_).square().sum() / static_cast<double>(n - 1));
      m.y_scale_ = sd > 0.0 ? sd : 1.0;
    }
  }
  m.targets_ = (y.array() - m.y_offset_) / m.y_scale_;

  Eigen::MatrixXd scaled;
  if (!GPWorkspace::factorize(m, scaled, params)) {
    throw IllConditionedKernel("gp: Cholesky failed at jitter " + std::to_string(kMaxJitter));
  }
  return m;
}

bool GPWorkspace::factorize(GPModel& m, Eigen::MatrixXd& scaled_train, const KernelParams& p) {
  scaled_train = scale_columns(m.train_, p.lengthscales);
  Eigen::MatrixXd k;
  kernels::covariance_matrix(scaled_train, p.signal_variance, k);
  const double jitter = factor_with_jitter(k, p.noise_variance, m.chol_);
  if (jitter < 0.0) return false;
  m.jitter_ = jitter;
  m.params_ = p;
  const Eigen::MatrixXd& chol = m.chol_;
  m.alpha_ = chol.triangularView<Eigen::Lower>().solve(m.targets_);
  chol.triangularView<Eigen::Lower>().transpose().solveInPlace(m.alpha_);
  const auto n = static_cast<double>(m.targets_.size());
  m.lml_ = -0.5 * m.targets_.dot(m.alpha_) - m.chol_.diagonal().array().log().sum() -
           0.5 * n * std::log(2.0 * std::numbers::pi);
  return std::isfinite(m.lml_);
}

std::vector<Prediction> GPModel::predict_impl(std::span<const Point> xs, bool parallel) const {
  const Eigen::MatrixXd query = scale_columns(to_kernel_space(xs), params_.lengthscales);
  const auto m = static_cast<Eigen::Index>(xs.size());
  std::vector<Prediction> out(xs.size());
  const double sv = params_.signal_variance;
  if (size() == 0) {
    for (auto& p : out) p = {y_offset_, sv * y_scale_ * y_scale_};
    return out;
  }
  const Eigen::MatrixXd scaled_train = scale_columns(train_, params_.lengthscales);
  Eigen::MatrixXd kx;
  if (parallel) {
    kernels::cross_covariance(scaled_train, query, sv, kx);
  } else {
    kernels::cross_covariance_serial(scaled_train, query, sv, kx);
  }
  const auto lower = chol_.triangularView<Eigen::Lower>();
  const bool par = parallel && m * static_cast<Eigen::Index>(size()) * static_cast<Eigen::Index>(size()) >=
                                   kernels::kParallelThreshold;
#pragma omp parallel for schedule(static) if (par)
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::VectorXd v = lower.solve(kx.col(j));
    const double mean = kx.col(j).dot(alpha_);
    const double var = std::max(0.0, sv - v.squaredNorm());
    out[static_cast<std::size_t>(j)] = {y_offset_ + y_scale_ * mean, y_scale_ * y_scale_ * var};
  }
  return out;
}

Prediction GPModel::predict(const Point& x) const {
  return predict_impl(std::span<const Point>(&x, 1), false).front();
}

std::vector<Prediction> GPModel::predict_batch(std::span<const Point> xs) const { return predict_impl(xs, true); }

std::vector<Prediction> GPModel::predict_batch_serial(std::span<const Point> xs) const {
  return predict_impl(xs, false);
}

std::vector<double> GPModel::mean_batch(std::span<const Point> xs) const {
  std::vector<double> out(xs.size(), y_offset_);
  if (xs.empty() || size() == 0) return out;
  const Eigen::MatrixXd query = scale_columns(to_kernel_space(xs), params_.lengthscales);
  const Eigen::MatrixXd scaled_train = scale_columns(train_, params_.lengthscales);
  Eigen::MatrixXd kx;
  kernels::cross_covariance(scaled_train, query, params_.signal_variance, kx);
  const Eigen::VectorXd mean = kx.transpose() * alpha_;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += y_scale_ * mean(static_cast<Eigen::Index>(j));
  return out;
}

GPModel fit_gp(const Dataset& data, const KernelParams& init, const GPFitOptions& options, Rng& rng) {
  GPModel base = GPModel::condition(data, init, options);
  if (!options.optimize) return base;
  if (options.restarts < 1) throw InvalidArgument("gp: restarts must be >= 1");

  const int d = data.dim();
  const int n_ls = options.ard ? d : 1;
  const int n_params = 1 + n_ls + (options.optimize_noise ? 1 : 0);

  auto encode = [&](const KernelParams& p) {
    Eigen::VectorXd theta(n_params);
    theta(0) = std::log(p.signal_variance);
    if (options.ard) {
      theta.segment(1, d) = p.lengthscales.array().log();
    } else {
      theta(1) = p.lengthscales.array().log().mean();
    }
    if (options.optimize_noise) theta(n_params - 1) = std::log(std::max(p.noise_variance, 1e-300));
    return theta.cwiseMax(kLogParamLower).cwiseMin(kLogParamUpper).eval();
  };
  auto decode = [&](const Eigen::VectorXd& theta) {
    KernelParams p;
    p.signal_variance = std::exp(theta(0));
    p.lengthscales = options.ard ? Eigen::VectorXd(theta.segment(1, d).array().exp())
                                 : Eigen::VectorXd::Constant(d, std::exp(theta(1)));
    p.noise_variance = options.optimize_noise ? std::exp(theta(n_params - 1)) : init.noise_variance;
    return p;
  };

  GPModel work = base;
  Eigen::MatrixXd scratch;
  auto negative_lml = [&](const Eigen::VectorXd& theta) {
    if (!GPWorkspace::factorize(work, scratch, decode(theta))) return std::numeric_limits<double>::infinity();
    return -work.log_marginal_likelihood();
  };

  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n_params, kLogParamLower);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n_params, kLogParamUpper);
  NelderMeadOptions nm;
  nm.max_evals = options.max_evals_per_restart > 0 ? options.max_evals_per_restart : 40 * (n_params + 1);

  const Eigen::VectorXd theta0 = encode(init);
  // Restarts after the first are centred on lengthscales equal to the input
  // spread per dimension, so a badly scaled init cannot trap every start.
  KernelParams scaled_init = init;
  {
    const Eigen::MatrixXd& xs = base.train_inputs();
    Eigen::VectorXd spread = xs.rowwise().maxCoeff() - xs.rowwise().minCoeff();
    for (Eigen::Index k = 0; k < spread.size(); ++k) {
      if (!(spread(k) > 0.0)) spread(k) = init.lengthscales(k);
    }
    scaled_init.lengthscales = spread;
  }
  const Eigen::VectorXd theta1 = encode(scaled_init);
  double best_value = -base.log_marginal_likelihood();
  std::optional<Eigen::VectorXd> best_theta;
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd start = r == 0 ? theta0 : theta1;
    if (r > 1) {
      for (int i = 0; i < n_params; ++i) start(i) += rng.uniform(-kRestartSpread, kRestartSpread);
    }
    start = start.cwiseMax(lo).cwiseMin(hi);
    const NelderMeadResult res = nelder_mead_minimize(negative_lml, start, lo, hi, nm);
    if (res.value < best_value) {
      best_value = res.value;
      best_theta = res.x;
    }
  }
  if (!best_theta) return base;
  // A short restart from the winner; the collapsed simplex of the first run
  // often stalls just short of the optimum.
  NelderMeadOptions polish = nm;
  polish.initial_step = 0.1;
  const NelderMeadResult res = nelder_mead_minimize(negative_lml, *best_theta, lo, hi, polish);
  if (res.value < best_value) best_theta = res.x;
  if (!GPWorkspace::factorize(work, scratch, decode(*best_theta))) return base;
  return work;
}

}  // namespace hypbo
