#pragma once
// Reference GP posterior computed with plain Gaussian elimination on
// std::vector, independent of Eigen's factorizations.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace hypbo::testing {

using Matrix = std::vector<std::vector<double>>;

inline double matern52_reference(const std::vector<double>& x, const std::vector<double>& z, double sv,
                                 const std::vector<double>& ls) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = (x[i] - z[i]) / ls[i];
    r2 += t * t;
  }
  const double s = std::sqrt(5.0 * r2);
  return sv * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

// Solves A x = b by elimination with partial pivoting; returns x and log|det A|.
inline std::pair<std::vector<double>, double> solve(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  double logdet = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    logdet += std::log(std::abs(a[c][c]));
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return {x, logdet};
}

struct DensePosterior {
  double mean;
  double variance;
};

struct DenseGp {
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  double sv;
  std::vector<double> ls;
  double diag;  // noise + jitter

  [[nodiscard]] Matrix gram() const {
    const std::size_t n = xs.size();
    Matrix k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) k[i][j] = matern52_reference(xs[i], xs[j], sv, ls) + (i == j ? diag : 0.0);
    }
    return k;
  }

  [[nodiscard]] DensePosterior predict(const std::vector<double>& q) const {
    std::vector<double> kq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) kq[i] = matern52_reference(xs[i], q, sv, ls);
    const auto alpha = solve(gram(), ys).first;
    const auto v = solve(gram(), kq).first;
    double mean = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mean += kq[i] * alpha[i];
      quad += kq[i] * v[i];
    }
    return {mean, sv - quad};
  }

  [[nodiscard]] double log_marginal_likelihood() const {
    const auto [alpha, logdet] = solve(gram(), ys);
    double fit = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) fit += ys[i] * alpha[i];
    return -0.5 * fit - 0.5 * logdet - 0.5 * static_cast<double>(ys.size()) * std::log(2.0 * std::numbers::pi);
  }
};

}  // namespace hypbo::testing
