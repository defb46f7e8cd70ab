#include "hypbo/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace hypbo {

NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                                      const Eigen::VectorXd& upper, const NelderMeadOptions& options) {
  // Dimension-adaptive coefficients; they reduce to the classical 1, 2, 1/2,
  // 1/2 at n = 2.
  const Eigen::Index n = x0.size();
  const double dn = static_cast<double>(std::max<Eigen::Index>(n, 2));
  const double kReflect = 1.0;
  const double kExpand = 1.0 + 2.0 / dn;
  const double kContract = 0.75 - 0.5 / dn;
  const double kShrink = 1.0 - 1.0 / dn;

  int evals = 0;
  auto clamp = [&](Eigen::VectorXd x) -> Eigen::VectorXd { return x.cwiseMax(lower).cwiseMin(upper); };
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  simplex.reserve(static_cast<std::size_t>(n + 1));
  simplex.push_back(clamp(x0));
  values.push_back(eval(simplex.front()));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd v = simplex.front();
    // Step away from whichever bound is closer so the vertex stays distinct.
    v(i) += (upper(i) - v(i) >= options.initial_step) ? options.initial_step : -options.initial_step;
    simplex.push_back(clamp(v));
    values.push_back(eval(simplex.back()));
  }

  std::vector<std::size_t> order(simplex.size());
  while (evals < options.max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double spread = 0.0;
    for (const auto& v : simplex) spread = std::max(spread, (v - simplex[best]).cwiseAbs().maxCoeff());
    if (std::isfinite(values[worst]) && values[worst] - values[best] <= options.f_tol &&
        spread <= options.x_tol) {
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = clamp(centroid + kReflect * (centroid - simplex[worst]));
    const double fr = eval(reflected);
    if (fr < values[best]) {
      const Eigen::VectorXd expanded = clamp(centroid + kExpand * (reflected - centroid));
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Eigen::VectorXd contracted =
        clamp(outside ? centroid + kContract * (reflected - centroid)
                      : centroid + kContract * (simplex[worst] - centroid));
    const double fc = eval(contracted);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = clamp(simplex[best] + kShrink * (simplex[i] - simplex[best]));
      values[i] = eval(simplex[i]);
    }
  }

  const auto it = std::min_element(values.begin(), values.end());
  const auto idx = static_cast<std::size_t>(it - values.begin());
  return {simplex[idx], values[idx], evals};
}

}  // namespace hypbo
