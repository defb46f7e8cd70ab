#pragma once

#include <span>
#include <utility>

namespace hypbo {

struct WilcoxonResult {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double statistic = 0.0;  ///< min(W+, W-)
  int n = 0;               ///< pairs with a non-zero difference
  double p_value = 1.0;    ///< two-sided
  bool exact = false;
};

/// Two-sided signed-rank test on the differences a_i - b_i. Zero differences
/// are dropped and tied magnitudes share their average rank. The null
/// distribution is enumerated exactly for n <= 15; above that the normal
/// approximation with continuity and tie corrections is used.
/// Throws DegenerateSample when every difference is zero and InvalidArgument
/// when fewer than five differences are non-zero or the spans differ in size.
[[nodiscard]] WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);
[[nodiscard]] WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs);

inline constexpr int kExactWilcoxonLimit = 15;

/// alpha / k. Throws InvalidArgument unless 0 < alpha < 1 and k >= 1.
[[nodiscard]] double bonferroni(double alpha, int k);

}  // namespace hypbo
