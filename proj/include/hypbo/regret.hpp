#pragma once

#include <span>
#include <vector>

#include "hypbo/engine.hpp"

namespace hypbo {

/// Best objective value after each budget iteration 1..trace.iterations().
[[nodiscard]] std::vector<double> best_so_far(const Trace& trace);

/// r_i = optimum - incumbent after iteration i. Nonincreasing.
[[nodiscard]] std::vector<double> simple_regret(const Trace& trace, double optimum);

/// R_i = sum of (optimum - y) over every post-initial record with iteration <= i.
[[nodiscard]] std::vector<double> cumulative_regret(const Trace& trace, double optimum);

struct CurveStats {
  std::vector<double> mean;
  std::vector<double> standard_error;
  std::vector<double> standard_deviation;
};

/// Pointwise mean, sample standard deviation and standard error across
/// equal-length curves. A single curve has zero spread.
[[nodiscard]] CurveStats aggregate(std::span<const std::vector<double>> curves);

}  // namespace hypbo
