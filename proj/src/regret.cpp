#include "hypbo/regret.hpp"

#include <cmath>
#include <limits>

#include "hypbo/errors.hpp"

namespace hypbo {

std::vector<double> best_so_far(const Trace& trace) {
  const int iters = trace.iterations();
  std::vector<double> out(static_cast<std::size_t>(std::max(iters, 0)), -std::numeric_limits<double>::infinity());
  double best = -std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  for (int i = 1; i <= iters; ++i) {
    while (k < trace.records.size() && trace.records[k].iteration <= i) best = std::max(best, trace.records[k++].y);
    out[static_cast<std::size_t>(i - 1)] = best;
  }
  return out;
}

std::vector<double> simple_regret(const Trace& trace, double optimum) {
  std::vector<double> out = best_so_far(trace);
  for (double& v : out) v = optimum - v;
  return out;
}

std::vector<double> cumulative_regret(const Trace& trace, double optimum) {
  const int iters = trace.iterations();
  std::vector<double> out(static_cast<std::size_t>(std::max(iters, 0)), 0.0);
  double total = 0.0;
  std::size_t k = 0;
  while (k < trace.records.size() && trace.records[k].iteration == 0) ++k;
  for (int i = 1; i <= iters; ++i) {
    while (k < trace.records.size() && trace.records[k].iteration <= i) total += optimum - trace.records[k++].y;
    out[static_cast<std::size_t>(i - 1)] = total;
  }
  return out;
}

CurveStats aggregate(std::span<const std::vector<double>> curves) {
  CurveStats s;
  if (curves.empty()) return s;
  const std::size_t len = curves.front().size();
  for (const auto& c : curves) {
    if (c.size() != len) throw InvalidArgument("aggregate: curves differ in length");
  }
  const auto n = static_cast<double>(curves.size());
  s.mean.assign(len, 0.0);
  s.standard_deviation.assign(len, 0.0);
  s.standard_error.assign(len, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[i];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& c : curves) ss += (c[i] - mean) * (c[i] - mean);
    const double sd = curves.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.mean[i] = mean;
    s.standard_deviation[i] = sd;
    s.standard_error[i] = sd / std::sqrt(n);
  }
  return s;
}

}  // namespace hypbo
