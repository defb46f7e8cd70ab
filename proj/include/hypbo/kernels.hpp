#pragma once

// Data-parallel inner loops of the surrogate and acquisition code.
//
// Each kernel has an OpenMP version and a `_serial` reference. Both evaluate
// the same per-element expression in the same order, so their outputs are
// bit-identical; tests/test_kernels.cpp holds them to that and
// bench/bench_kernels.cpp times them against each other. No floating-point
// reductions cross thread boundaries, which keeps traces deterministic for
// any thread count.

#include <cmath>
#include <span>

#include <Eigen/Core>

namespace hypbo::kernels {

/// Matérn nu=5/2 as a function of the lengthscale-scaled distance r.
inline double matern52_of_distance(double r, double signal_variance) {
  constexpr double kSqrt5 = 2.23606797749978969641;
  const double s = kSqrt5 * r;
  return signal_variance * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

// Point sets are column-major d x n matrices, one point per column, already
// divided by the lengthscales.

/// out(i,j) = k(x_i, x_j), n x n.
void covariance_matrix(const Eigen::MatrixXd& scaled, double signal_variance, Eigen::MatrixXd& out);
void covariance_matrix_serial(const Eigen::MatrixXd& scaled, double signal_variance, Eigen::MatrixXd& out);

/// out(i,j) = k(train_i, query_j), n_train x n_query.
void cross_covariance(const Eigen::MatrixXd& train, const Eigen::MatrixXd& query, double signal_variance,
                      Eigen::MatrixXd& out);
void cross_covariance_serial(const Eigen::MatrixXd& train, const Eigen::MatrixXd& query,
                             double signal_variance, Eigen::MatrixXd& out);

/// Closed-form EI on parallel arrays; all spans have equal length.
void expected_improvement_batch(std::span<const double> mean, std::span<const double> stddev,
                                double incumbent, double jitter, std::span<double> out);
void expected_improvement_batch_serial(std::span<const double> mean, std::span<const double> stddev,
                                       double incumbent, double jitter, std::span<double> out);

/// Below this many pairwise kernel evaluations the OpenMP versions stay serial.
inline constexpr long kParallelThreshold = 4096;

}  // namespace hypbo::kernels
