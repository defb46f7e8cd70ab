#include <vector>

#include <benchmark/benchmark.h>

#include "hypbo/kernels.hpp"
#include "hypbo/rng.hpp"

namespace {

Eigen::MatrixXd random_points(int dim, int n, std::uint64_t seed) {
  hypbo::Rng rng(seed);
  Eigen::MatrixXd m(dim, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < dim; ++k) m(k, j) = rng.uniform(0.0, 1.0);
  }
  return m;
}

template <bool Parallel>
void BM_CovarianceMatrix(benchmark::State& state) {
  const Eigen::MatrixXd x = random_points(10, static_cast<int>(state.range(0)), 1);
  Eigen::MatrixXd out;
  for (auto _ : state) {
    if constexpr (Parallel) {
      hypbo::kernels::covariance_matrix(x, 1.0, out);
    } else {
      hypbo::kernels::covariance_matrix_serial(x, 1.0, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool Parallel>
void BM_CrossCovariance(benchmark::State& state) {
  const Eigen::MatrixXd train = random_points(10, 200, 2);
  const Eigen::MatrixXd query = random_points(10, static_cast<int>(state.range(0)), 3);
  Eigen::MatrixXd out;
  for (auto _ : state) {
    if constexpr (Parallel) {
      hypbo::kernels::cross_covariance(train, query, 1.0, out);
    } else {
      hypbo::kernels::cross_covariance_serial(train, query, 1.0, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * 200 * state.range(0));
}

template <bool Parallel>
void BM_ExpectedImprovement(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  hypbo::Rng rng(4);
  std::vector<double> mean(n);
  std::vector<double> sd(n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    mean[i] = rng.normal();
    sd[i] = rng.uniform(0.01, 1.0);
  }
  for (auto _ : state) {
    if constexpr (Parallel) {
      hypbo::kernels::expected_improvement_batch(mean, sd, 0.5, 0.0, out);
    } else {
      hypbo::kernels::expected_improvement_batch_serial(mean, sd, 0.5, 0.0, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_CovarianceMatrix<false>)->Name("covariance_matrix/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_CovarianceMatrix<true>)->Name("covariance_matrix/omp")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_CrossCovariance<false>)->Name("cross_covariance/serial")->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(BM_CrossCovariance<true>)->Name("cross_covariance/omp")->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(BM_ExpectedImprovement<false>)->Name("expected_improvement/serial")->RangeMultiplier(8)->Range(512, 32768);
BENCHMARK(BM_ExpectedImprovement<true>)->Name("expected_improvement/omp")->RangeMultiplier(8)->Range(512, 32768);

BENCHMARK_MAIN();
