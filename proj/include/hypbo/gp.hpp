#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hypbo/dataset.hpp"
#include "hypbo/rng.hpp"
#include "hypbo/search_space.hpp"

namespace hypbo {

/// Matérn-5/2 kernel with constant scaling and homoscedastic noise.
struct KernelParams {
  static constexpr double kSmoothness = 2.5;

  double signal_variance = 1.0;
  Eigen::VectorXd lengthscales;
  double noise_variance = 1e-6;

  /// sv = 1, every lengthscale = `lengthscale`, noise = `noise`.
  static KernelParams uniform(int dim, double lengthscale = 1.0, double noise = 1e-6);

  /// Throws InvalidArgument unless sv > 0, all lengthscales > 0, noise >= 0.
  void validate(int dim) const;
};

/// signal_variance * (1 + sqrt5 r + 5 r^2 / 3) * exp(-sqrt5 r), r the
/// lengthscale-scaled Euclidean distance.
[[nodiscard]] double matern52(const Point& x, const Point& z, const KernelParams& params);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

struct GPFitOptions {
  /// When false the init parameters are used verbatim.
  bool optimize = true;
  /// Multistart budget for the marginal-likelihood search.
  int restarts = 5;
  /// Per-dimension lengthscales; false ties them to one shared value.
  bool ard = true;
  bool optimize_noise = false;
  /// Fit on (y - mean) / sd and map predictions back.
  bool standardize_targets = false;
  /// Inputs are mapped onto the unit cube of this space before the kernel.
  std::optional<SearchSpace> input_space;
  /// Nelder-Mead evaluations per restart; 0 picks 40 * (parameters + 1).
  int max_evals_per_restart = 0;
};

inline constexpr double kLogParamLower = -9.210340371976184;  // log(1e-4)
inline constexpr double kLogParamUpper = 9.210340371976184;   // log(1e4)

/// Zero-mean GP regression model. Immutable after fitting; predict is
/// read-only and safe to call concurrently.
class GPModel {
 public:
  /// Model with no training data: mean 0, variance = signal_variance.
  static GPModel prior(int dim, KernelParams params, std::optional<SearchSpace> input_space = std::nullopt);

  /// Exact model for fixed parameters. Throws IllConditionedKernel if the
  /// Cholesky fails at the largest jitter.
  static GPModel condition(const Dataset& data, KernelParams params, const GPFitOptions& options);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(train_.cols()); }
  [[nodiscard]] const KernelParams& params() const { return params_; }

  [[nodiscard]] Prediction predict(const Point& x) const;
  [[nodiscard]] std::vector<Prediction> predict_batch(std::span<const Point> xs) const;
  [[nodiscard]] std::vector<Prediction> predict_batch_serial(std::span<const Point> xs) const;
  /// Posterior means only; skips the triangular solves.
  [[nodiscard]] std::vector<double> mean_batch(std::span<const Point> xs) const;

  /// In the (possibly standardized) target units the model was fitted on.
  [[nodiscard]] double log_marginal_likelihood() const { return lml_; }

  /// Lower Cholesky factor of K + (noise + jitter) I.
  [[nodiscard]] const Eigen::MatrixXd& chol() const { return chol_; }
  [[nodiscard]] const Eigen::VectorXd& alpha() const { return alpha_; }
  [[nodiscard]] double jitter() const { return jitter_; }
  [[nodiscard]] double target_offset() const { return y_offset_; }
  [[nodiscard]] double target_scale() const { return y_scale_; }
  /// Noise variance expressed in the original target units.
  [[nodiscard]] double observation_noise_variance() const {
    return params_.noise_variance * y_scale_ * y_scale_;
  }
  /// Kernel-space copy of the training inputs (d x n, unit-cube if normalized).
  [[nodiscard]] const Eigen::MatrixXd& train_inputs() const { return train_; }

 private:
  friend class GPWorkspace;
  GPModel() = default;

  Eigen::MatrixXd to_kernel_space(std::span<const Point> xs) const;
  std::vector<Prediction> predict_impl(std::span<const Point> xs, bool parallel) const;

  int dim_ = 0;
  std::optional<SearchSpace> input_space_;
  Eigen::MatrixXd train_;  // d x n, unscaled by lengthscales
  Eigen::VectorXd targets_;
  double y_offset_ = 0.0;
  double y_scale_ = 1.0;
  KernelParams params_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
  double lml_ = 0.0;
};

/// Fits a GP to d. With options.optimize, maximizes the log marginal
/// likelihood by multistart Nelder-Mead in log-parameter space (bounds
/// [1e-4, 1e4]); the first start is `init`, so the returned LML is never
/// below LML(init). Throws InvalidData for an empty dataset or non-finite y.
[[nodiscard]] GPModel fit_gp(const Dataset& data, const KernelParams& init, const GPFitOptions& options,
                             Rng& rng);

/// -1/2 y'alpha - sum log diag(L) - n/2 log 2 pi.
[[nodiscard]] inline double log_marginal_likelihood(const GPModel& m) { return m.log_marginal_likelihood(); }

}  // namespace hypbo
