#include "hypbo/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hypbo/errors.hpp"

namespace hypbo {

namespace {

constexpr std::uint64_t kCertifySeed = 0x6879706f74686573ULL;

Eigen::MatrixXd normalized_rows(Eigen::MatrixXd m, int dim, const char* what) {
  if (m.rows() == 0) return Eigen::MatrixXd(0, dim);
  if (m.cols() != dim) {
    throw InvalidArgument(std::string("hypothesis: ") + what + " row width " +
                          std::to_string(m.cols()) + " != space dim " + std::to_string(dim));
  }
  if (!m.allFinite()) throw InvalidArgument(std::string("hypothesis: non-finite ") + what);
  return m;
}

/// Index of the single nonzero coefficient, or -1.
int single_axis(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  int axis = -1;
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    if (row(k) != 0.0) {
      if (axis >= 0) return -1;
      axis = static_cast<int>(k);
    }
  }
  return axis;
}

}  // namespace

SearchSpace::SearchSpace(Unchecked, Eigen::VectorXd lower, Eigen::VectorXd upper,
                         std::vector<std::string> names)
    : lower_(std::move(lower)), upper_(std::move(upper)), names_(std::move(names)) {
  if (lower_.size() == 0) throw InvalidArgument("search space: dim must be positive");
  if (lower_.size() != upper_.size()) throw InvalidArgument("search space: bound length mismatch");
  if (!names_.empty() && names_.size() != static_cast<std::size_t>(lower_.size())) {
    throw InvalidArgument("search space: names length mismatch");
  }
  if (!lower_.allFinite() || !upper_.allFinite()) throw InvalidArgument("search space: non-finite bound");
}

SearchSpace::SearchSpace(Eigen::VectorXd lower, Eigen::VectorXd upper, std::vector<std::string> names)
    : SearchSpace(Unchecked{}, std::move(lower), std::move(upper), std::move(names)) {
  for (int i = 0; i < dim(); ++i) {
    if (!(lower_(i) < upper_(i))) {
      throw InvalidArgument("search space: lower >= upper on axis " + std::to_string(i));
    }
  }
}

SearchSpace SearchSpace::cube(int dim, double lo, double hi) {
  if (dim <= 0) throw InvalidArgument("search space: dim must be positive");
  return SearchSpace(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
}

SearchSpace SearchSpace::degenerate(Eigen::VectorXd lower, Eigen::VectorXd upper,
                                    std::vector<std::string> names) {
  SearchSpace s(Unchecked{}, std::move(lower), std::move(upper), std::move(names));
  for (int i = 0; i < s.dim(); ++i) {
    if (s.lower_(i) > s.upper_(i)) {
      throw InfeasibleHypothesis("bounding box empty on axis " + std::to_string(i));
    }
  }
  return s;
}

std::optional<int> SearchSpace::find(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

int SearchSpace::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw InvalidArgument("search space: unknown coordinate '" + std::string(name) + "'");
}

void SearchSpace::check_dim(const Point& x) const {
  if (x.size() != dim()) {
    throw InvalidArgument("point dimension " + std::to_string(x.size()) + " != " + std::to_string(dim()));
  }
}

bool SearchSpace::contains(const Point& x) const {
  check_dim(x);
  return ((x.array() >= lower_.array()) && (x.array() <= upper_.array())).all();
}

Point SearchSpace::sample_uniform(Rng& rng) const {
  Point x(dim());
  for (int i = 0; i < dim(); ++i) x(i) = rng.uniform(lower_(i), upper_(i));
  return x;
}

std::pair<double, double> SearchSpace::axis_interval(const Point& /*x*/, int axis) const {
  return {lower_(axis), upper_(axis)};
}

Point SearchSpace::to_unit(const Point& x) const {
  Point u(dim());
  for (int i = 0; i < dim(); ++i) {
    const double w = upper_(i) - lower_(i);
    u(i) = w > 0.0 ? (x(i) - lower_(i)) / w : 0.0;
  }
  return u;
}

Hypothesis::Hypothesis(std::string label, SearchSpace space, Eigen::MatrixXd eq_lhs, Eigen::VectorXd eq_rhs,
                       Eigen::MatrixXd ineq_lhs, Eigen::VectorXd ineq_rhs)
    : label_(std::move(label)),
      space_(std::move(space)),
      eq_lhs_(normalized_rows(std::move(eq_lhs), space_.dim(), "equality")),
      eq_rhs_(std::move(eq_rhs)),
      ineq_lhs_(normalized_rows(std::move(ineq_lhs), space_.dim(), "inequality")),
      ineq_rhs_(std::move(ineq_rhs)),
      box_(space_) {
  if (eq_rhs_.size() != eq_lhs_.rows() || ineq_rhs_.size() != ineq_lhs_.rows()) {
    throw InvalidArgument("hypothesis '" + label_ + "': rhs length does not match row count");
  }
  if (eq_lhs_.rows() + ineq_lhs_.rows() == 0) {
    throw InvalidArgument("hypothesis '" + label_ + "': empty constraint system");
  }
  if (!eq_rhs_.allFinite() || !ineq_rhs_.allFinite()) {
    throw InvalidArgument("hypothesis '" + label_ + "': non-finite rhs");
  }
  default_eq_tols_ = kDefaultEqTolScale * eq_lhs_.rowwise().norm();
  build_box();

  Rng rng(kCertifySeed);
  try {
    (void)sample_uniform(rng, kCertifyAttempts);
  } catch (const FeasibilityBudgetExhausted&) {
    throw InfeasibleHypothesis("hypothesis '" + label_ + "': no feasible point found in " +
                               std::to_string(kCertifyAttempts) + " draws");
  }
}

Hypothesis Hypothesis::box(std::string label, const SearchSpace& space, const Eigen::VectorXd& lower,
                           const Eigen::VectorXd& upper) {
  const int d = space.dim();
  if (lower.size() != d || upper.size() != d) throw InvalidArgument("hypothesis box: bound length mismatch");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * d, d);
  Eigen::VectorXd c(2 * d);
  for (int i = 0; i < d; ++i) {
    b(2 * i, i) = -1.0;
    c(2 * i) = -lower(i);
    b(2 * i + 1, i) = 1.0;
    c(2 * i + 1) = upper(i);
  }
  return Hypothesis(std::move(label), space, Eigen::MatrixXd(0, d), Eigen::VectorXd(0), std::move(b),
                    std::move(c));
}

void Hypothesis::build_box() {
  Eigen::VectorXd lo = space_.lower();
  Eigen::VectorXd hi = space_.upper();
  pinned_.assign(static_cast<std::size_t>(dim()), false);

  for (Eigen::Index r = 0; r < ineq_lhs_.rows(); ++r) {
    const int k = single_axis(ineq_lhs_.row(r));
    if (k < 0) continue;
    const double a = ineq_lhs_(r, k);
    const double bound = ineq_rhs_(r) / a;
    if (a > 0.0) {
      hi(k) = std::min(hi(k), bound);
    } else {
      lo(k) = std::max(lo(k), bound);
    }
  }

  for (Eigen::Index r = 0; r < eq_lhs_.rows(); ++r) {
    const int k = single_axis(eq_lhs_.row(r));
    if (k < 0) continue;
    const double a = eq_lhs_(r, k);
    const double v = eq_rhs_(r) / a;
    const double tol = default_eq_tols_(r) / std::abs(a);
    if (v < lo(k) - tol || v > hi(k) + tol) {
      throw InfeasibleHypothesis("hypothesis '" + label_ + "': equality pin on axis " + std::to_string(k) +
                                 " lies outside its bounds");
    }
    lo(k) = v;
    hi(k) = v;
    pinned_[static_cast<std::size_t>(k)] = true;
  }

  for (int k = 0; k < dim(); ++k) {
    if (lo(k) > hi(k)) {
      throw InfeasibleHypothesis("hypothesis '" + label_ + "': bounding box empty on axis " +
                                 std::to_string(k));
    }
  }
  box_ = SearchSpace::degenerate(std::move(lo), std::move(hi), space_.names());
}

bool Hypothesis::satisfies(const Point& x, const Eigen::VectorXd& eq_tols) const {
  for (Eigen::Index r = 0; r < ineq_lhs_.rows(); ++r) {
    if (ineq_lhs_.row(r).dot(x) > ineq_rhs_(r)) return false;
  }
  for (Eigen::Index r = 0; r < eq_lhs_.rows(); ++r) {
    if (std::abs(eq_lhs_.row(r).dot(x) - eq_rhs_(r)) > eq_tols(r)) return false;
  }
  return true;
}

bool Hypothesis::contains(const Point& x) const {
  space_.check_dim(x);
  return satisfies(x, default_eq_tols_);
}

bool Hypothesis::contains(const Point& x, double eq_tol) const {
  space_.check_dim(x);
  if (eq_tol < 0.0) throw InvalidArgument("contains: eq_tol must be nonnegative");
  return satisfies(x, Eigen::VectorXd::Constant(eq_lhs_.rows(), eq_tol));
}

Point Hypothesis::sample_uniform(Rng& rng, int max_attempts) const {
  if (max_attempts <= 0) throw InvalidArgument("sample_uniform: max_attempts must be positive");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Point x = box_.sample_uniform(rng);
    if (satisfies(x, default_eq_tols_)) return x;
  }
  throw FeasibilityBudgetExhausted("hypothesis '" + label_ + "': no feasible draw in " +
                                   std::to_string(max_attempts) + " attempts");
}

std::pair<double, double> Hypothesis::axis_interval(const Point& x, int axis) const {
  double lo = box_.lower()(axis);
  double hi = box_.upper()(axis);
  if (pinned_[static_cast<std::size_t>(axis)]) return {lo, hi};

  for (Eigen::Index r = 0; r < ineq_lhs_.rows(); ++r) {
    const double a = ineq_lhs_(r, axis);
    if (a == 0.0) continue;
    const double rest = ineq_lhs_.row(r).dot(x) - a * x(axis);
    const double bound = (ineq_rhs_(r) - rest) / a;
    if (a > 0.0) {
      hi = std::min(hi, bound);
    } else {
      lo = std::max(lo, bound);
    }
  }
  for (Eigen::Index r = 0; r < eq_lhs_.rows(); ++r) {
    const double a = eq_lhs_(r, axis);
    if (a == 0.0) continue;
    const double rest = eq_lhs_.row(r).dot(x) - a * x(axis);
    double t0 = (eq_rhs_(r) - default_eq_tols_(r) - rest) / a;
    double t1 = (eq_rhs_(r) + default_eq_tols_(r) - rest) / a;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
  }
  return {lo, hi};
}

Hypothesis Hypothesis::with_inequality(const Eigen::RowVectorXd& row, double rhs, std::string label) const {
  Eigen::MatrixXd b(ineq_lhs_.rows() + 1, dim());
  b << ineq_lhs_, row;
  Eigen::VectorXd c(ineq_rhs_.size() + 1);
  c << ineq_rhs_, rhs;
  return Hypothesis(std::move(label), space_, eq_lhs_, eq_rhs_, std::move(b), std::move(c));
}

Dataset filter_dataset(const Hypothesis& h, const Dataset& d, std::optional<double> eq_tol) {
  Dataset out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const bool inside = eq_tol ? h.contains(d.x(i), *eq_tol) : h.contains(d.x(i));
    if (inside) out.append(d.x(i), d.y(i));
  }
  return out;
}

}  // namespace hypbo
