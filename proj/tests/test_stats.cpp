#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hypbo/errors.hpp"
#include "hypbo/rng.hpp"
#include "hypbo/stats.hpp"

namespace hypbo {
namespace {

// Average ranks of |d| for the non-zero differences.
std::vector<double> average_ranks(const std::vector<double>& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(d[a]) < std::abs(d[b]); });
  std::vector<double> ranks(d.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Two-sided exact p by visiting every sign assignment.
double enumerated_p(const std::vector<double>& d) {
  const std::vector<double> ranks = average_ranks(d);
  const double total = std::accumulate(ranks.begin(), ranks.end(), 0.0);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) w_plus += d[i] > 0 ? ranks[i] : 0.0;
  const double observed = std::min(w_plus, total - w_plus);
  const std::size_t n = d.size();
  std::uint64_t extreme = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) w += (mask >> i) & 1U ? ranks[i] : 0.0;
    if (std::min(w, total - w) <= observed + 1e-9) ++extreme;
  }
  return std::min(1.0, static_cast<double>(extreme) / static_cast<double>(std::uint64_t{1} << n));
}

WilcoxonResult test_diffs(const std::vector<double>& d) {
  const std::vector<double> zeros(d.size(), 0.0);
  return wilcoxon_signed_rank(d, zeros);
}

TEST(Wilcoxon, AllPositiveFivePairs) {
  const WilcoxonResult r = test_diffs({1, 2, 3, 4, 5});
  EXPECT_EQ(r.w_plus, 15.0);
  EXPECT_EQ(r.w_minus, 0.0);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.n, 5);
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.p_value, 2.0 / 32.0);
}

TEST(Wilcoxon, ExactMatchesEnumerationWithTiesAndZeros) {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5 + trial % 11;
    std::vector<double> d(static_cast<std::size_t>(n));
    for (auto& v : d) v = std::round(rng.uniform(-4.0, 5.0) * 2.0) / 2.0;  // coarse grid forces ties
    std::vector<double> nonzero;
    for (double v : d) {
      if (v != 0.0) nonzero.push_back(v);
    }
    if (nonzero.size() < 5) continue;
    const WilcoxonResult r = test_diffs(d);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.n, static_cast<int>(nonzero.size()));
    EXPECT_NEAR(r.p_value, enumerated_p(nonzero), 1e-12) << "trial " << trial;
  }
}

TEST(Wilcoxon, SwappingSidesKeepsP) {
  Rng rng(32);
  for (int n : {6, 15, 16, 40}) {
    std::vector<double> a(static_cast<std::size_t>(n));
    std::vector<double> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = rng.normal() + 0.3;
      b[static_cast<std::size_t>(i)] = rng.normal();
    }
    const WilcoxonResult ab = wilcoxon_signed_rank(a, b);
    const WilcoxonResult ba = wilcoxon_signed_rank(b, a);
    EXPECT_DOUBLE_EQ(ab.p_value, ba.p_value);
    EXPECT_DOUBLE_EQ(ab.w_plus, ba.w_minus);
  }
}

TEST(Wilcoxon, PairOverloadAgrees) {
  const std::vector<std::pair<double, double>> pairs = {{1, 0}, {2, 5}, {3, 1}, {4, 4}, {9, 2}, {0.5, 3}, {7, 1}};
  std::vector<double> a, b;
  for (const auto& [x, y] : pairs) {
    a.push_back(x);
    b.push_back(y);
  }
  const WilcoxonResult p = wilcoxon_signed_rank(pairs);
  const WilcoxonResult s = wilcoxon_signed_rank(a, b);
  EXPECT_EQ(p.n, 6);
  EXPECT_EQ(p.p_value, s.p_value);
  EXPECT_EQ(p.statistic, s.statistic);
}

// The normal approximation with continuity correction tracks the exact
// distribution to within 0.01 in p at n = 15 and n = 20.
TEST(Wilcoxon, NormalApproximationBandAtBoundary) {
  Rng rng(33);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<double> d(20);
    for (auto& v : d) v = rng.normal() + 0.4;
    const WilcoxonResult big = test_diffs(d);
    EXPECT_FALSE(big.exact);
    EXPECT_EQ(big.n, 20);
    EXPECT_NEAR(big.p_value, enumerated_p(d), 0.01);

    const std::vector<double> first(d.begin(), d.begin() + 15);
    const WilcoxonResult small = test_diffs(first);
    EXPECT_TRUE(small.exact);
    EXPECT_NEAR(small.p_value, enumerated_p(first), 1e-12);
    const double mu = 15.0 * 16.0 / 4.0;
    const double sigma = std::sqrt(15.0 * 16.0 * 31.0 / 24.0);
    const double z = (std::abs(small.w_plus - mu) - 0.5) / sigma;
    const double approx = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    EXPECT_NEAR(small.p_value, approx, 0.01);
  }
}

TEST(Wilcoxon, Errors) {
  EXPECT_THROW((void)test_diffs({0, 0, 0, 0, 0, 0}), DegenerateSample);
  EXPECT_THROW((void)test_diffs({1, 2, 0, 3, 4, 0}), InvalidArgument);
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {1, 2, 3, 4};
  EXPECT_THROW((void)wilcoxon_signed_rank(a, b), InvalidArgument);
}

TEST(Bonferroni, Divides) {
  EXPECT_DOUBLE_EQ(bonferroni(0.05, 5), 0.01);
  EXPECT_DOUBLE_EQ(bonferroni(0.05, 1), 0.05);
  EXPECT_DOUBLE_EQ(bonferroni(0.01, 4), 0.0025);
  EXPECT_THROW((void)bonferroni(0.05, 0), InvalidArgument);
  EXPECT_THROW((void)bonferroni(1.5, 2), InvalidArgument);
}

}  // namespace
}  // namespace hypbo
