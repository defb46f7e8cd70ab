#pragma once

#include <functional>

#include <Eigen/Core>

namespace hypbo {

struct NelderMeadOptions {
  int max_evals = 400;
  /// Initial simplex edge, per coordinate.
  double initial_step = 0.5;
  double f_tol = 1e-9;
  double x_tol = 1e-7;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evals = 0;
};

/// Box-constrained Nelder-Mead minimization. Vertices are clamped into
/// [lower, upper]; non-finite objective values count as +inf. The result is
/// never worse than f(x0).
NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                                      const Eigen::VectorXd& upper, const NelderMeadOptions& options = {});

}  // namespace hypbo
