#include "hypbo/kernels.hpp"

#include "hypbo/acquisition.hpp"

namespace hypbo::kernels {

namespace {

inline double pair_value(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j,
                         double sv) {
  return matern52_of_distance((a.col(i) - b.col(j)).norm(), sv);
}

}  // namespace

void covariance_matrix(const Eigen::MatrixXd& scaled, double signal_variance, Eigen::MatrixXd& out) {
  const Eigen::Index n = scaled.cols();
  out.resize(n, n);
  const bool par = n * n * scaled.rows() >= kParallelThreshold;
#pragma omp parallel for schedule(dynamic, 8) if (par)
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j, j) = signal_variance;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = pair_value(scaled, i, scaled, j, signal_variance);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

void covariance_matrix_serial(const Eigen::MatrixXd& scaled, double signal_variance, Eigen::MatrixXd& out) {
  const Eigen::Index n = scaled.cols();
  out.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j, j) = signal_variance;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = pair_value(scaled, i, scaled, j, signal_variance);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

void cross_covariance(const Eigen::MatrixXd& train, const Eigen::MatrixXd& query, double signal_variance,
                      Eigen::MatrixXd& out) {
  const Eigen::Index n = train.cols();
  const Eigen::Index m = query.cols();
  out.resize(n, m);
  const bool par = n * m * train.rows() >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (par)
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = pair_value(train, i, query, j, signal_variance);
  }
}

void cross_covariance_serial(const Eigen::MatrixXd& train, const Eigen::MatrixXd& query,
                             double signal_variance, Eigen::MatrixXd& out) {
  const Eigen::Index n = train.cols();
  const Eigen::Index m = query.cols();
  out.resize(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = pair_value(train, i, query, j, signal_variance);
  }
}

void expected_improvement_batch(std::span<const double> mean, std::span<const double> stddev,
                                double incumbent, double jitter, std::span<double> out) {
  const auto m = static_cast<long>(out.size());
#pragma omp parallel for schedule(static) if (m >= kParallelThreshold)
  for (long j = 0; j < m; ++j) out[j] = expected_improvement(mean[j], stddev[j], incumbent, jitter);
}

void expected_improvement_batch_serial(std::span<const double> mean, std::span<const double> stddev,
                                       double incumbent, double jitter, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = expected_improvement(mean[j], stddev[j], incumbent, jitter);
  }
}

}  // namespace hypbo::kernels
