#include "hypbo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "hypbo/errors.hpp"

namespace hypbo {

namespace {

// Ranks are doubled so that average ranks of ties stay integral.
std::vector<int> doubled_ranks(const std::vector<double>& magnitudes, double& tie_term) {
  const std::size_t n = magnitudes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return magnitudes[i] < magnitudes[j]; });
  std::vector<int> ranks(n);
  tie_term = 0.0;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && magnitudes[order[end]] == magnitudes[order[start]]) ++end;
    const int doubled = static_cast<int>(start + 1 + end);  // 2 * mean of ranks start+1..end
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = doubled;
    const auto t = static_cast<double>(end - start);
    tie_term += t * t * t - t;
    start = end;
  }
  return ranks;
}

double exact_p(const std::vector<int>& ranks, int observed_plus) {
  const int total = std::accumulate(ranks.begin(), ranks.end(), 0);
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  int reach = 0;
  for (int r : ranks) {
    for (int s = reach; s >= 0; --s) counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
    reach += r;
  }
  const double all = std::ldexp(1.0, static_cast<int>(ranks.size()));
  double lower = 0.0;
  double upper = 0.0;
  for (int s = 0; s <= total; ++s) {
    if (s <= observed_plus) lower += counts[static_cast<std::size_t>(s)];
    if (s >= observed_plus) upper += counts[static_cast<std::size_t>(s)];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / all);
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("wilcoxon: samples differ in size");
  std::vector<double> magnitudes;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (!std::isfinite(d)) throw InvalidArgument("wilcoxon: non-finite difference");
    if (d == 0.0) continue;
    magnitudes.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  if (magnitudes.empty()) throw DegenerateSample("wilcoxon: all differences are zero");
  if (magnitudes.size() < 5) throw InvalidArgument("wilcoxon: fewer than five non-zero differences");

  double tie_term = 0.0;
  const std::vector<int> ranks = doubled_ranks(magnitudes, tie_term);
  int plus2 = 0;
  int minus2 = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) (positive[i] ? plus2 : minus2) += ranks[i];

  WilcoxonResult r;
  r.n = static_cast<int>(ranks.size());
  r.w_plus = plus2 / 2.0;
  r.w_minus = minus2 / 2.0;
  r.statistic = std::min(r.w_plus, r.w_minus);
  if (r.n <= kExactWilcoxonLimit) {
    r.exact = true;
    r.p_value = exact_p(ranks, plus2);
    return r;
  }
  const double n = r.n;
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  const double z = std::max(0.0, std::abs(r.w_plus - mean) - 0.5) / std::sqrt(var);
  r.p_value = std::min(1.0, std::erfc(z / std::numbers::sqrt2));
  return r;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& [x, y] : pairs) {
    a.push_back(x);
    b.push_back(y);
  }
  return wilcoxon_signed_rank(a, b);
}

double bonferroni(double alpha, int k) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("bonferroni: alpha must lie in (0, 1)");
  if (k < 1) throw InvalidArgument("bonferroni: k must be >= 1");
  return alpha / k;
}

}  // namespace hypbo
