#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hypbo/dataset.hpp"
#include "hypbo/rng.hpp"

namespace hypbo {

/// Axis-aligned box domain. User-facing spaces need lower < upper on every
/// axis; bounding boxes derived from hypotheses may collapse an axis to a
/// single value (an equality pin), which the `degenerate` factory allows.
class SearchSpace {
 public:
  SearchSpace(Eigen::VectorXd lower, Eigen::VectorXd upper, std::vector<std::string> names = {});

  static SearchSpace cube(int dim, double lo, double hi);
  /// lower <= upper suffices; empty axes still throw InfeasibleHypothesis.
  static SearchSpace degenerate(Eigen::VectorXd lower, Eigen::VectorXd upper,
                                std::vector<std::string> names = {});

  [[nodiscard]] int dim() const { return static_cast<int>(lower_.size()); }
  [[nodiscard]] const Eigen::VectorXd& lower() const { return lower_; }
  [[nodiscard]] const Eigen::VectorXd& upper() const { return upper_; }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }

  [[nodiscard]] std::optional<int> find(std::string_view name) const;
  /// Throws InvalidArgument when the name is unknown.
  [[nodiscard]] int index_of(std::string_view name) const;

  [[nodiscard]] bool contains(const Point& x) const;
  [[nodiscard]] Point sample_uniform(Rng& rng) const;
  [[nodiscard]] const SearchSpace& bounding_box() const { return *this; }
  [[nodiscard]] std::pair<double, double> axis_interval(const Point& x, int axis) const;

  /// Affine map onto [0,1]^d; degenerate axes map to 0.
  [[nodiscard]] Point to_unit(const Point& x) const;

  void check_dim(const Point& x) const;

 private:
  struct Unchecked {};
  SearchSpace(Unchecked, Eigen::VectorXd lower, Eigen::VectorXd upper, std::vector<std::string> names);

  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  std::vector<std::string> names_;
};

/// An expert hypothesis: {x in box : A x = b, B x <= c}.
///
/// Equality rows with a single nonzero coefficient pin that coordinate exactly;
/// other equality rows are tolerance slabs |A_r x - b_r| <= 1e-9 * ||A_r||.
/// Construction certifies the region nonempty by rejection sampling from the
/// bounding box and throws InfeasibleHypothesis otherwise.
class Hypothesis {
 public:
  static constexpr int kCertifyAttempts = 10'000;
  static constexpr double kDefaultEqTolScale = 1e-9;

  Hypothesis(std::string label, SearchSpace space, Eigen::MatrixXd eq_lhs, Eigen::VectorXd eq_rhs,
             Eigen::MatrixXd ineq_lhs, Eigen::VectorXd ineq_rhs);

  /// Box hypothesis expressed as 2d inequality rows (the farm-example form).
  static Hypothesis box(std::string label, const SearchSpace& space, const Eigen::VectorXd& lower,
                        const Eigen::VectorXd& upper);

  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] const SearchSpace& space() const { return space_; }
  [[nodiscard]] const Eigen::MatrixXd& eq_lhs() const { return eq_lhs_; }
  [[nodiscard]] const Eigen::VectorXd& eq_rhs() const { return eq_rhs_; }
  [[nodiscard]] const Eigen::MatrixXd& ineq_lhs() const { return ineq_lhs_; }
  [[nodiscard]] const Eigen::VectorXd& ineq_rhs() const { return ineq_rhs_; }
  [[nodiscard]] int dim() const { return space_.dim(); }

  /// Membership with the default per-row equality tolerance.
  [[nodiscard]] bool contains(const Point& x) const;
  /// Membership with an absolute equality tolerance.
  [[nodiscard]] bool contains(const Point& x, double eq_tol) const;

  /// Rejection sampling from the bounding box; pinned coordinates are exact.
  [[nodiscard]] Point sample_uniform(Rng& rng, int max_attempts = kCertifyAttempts) const;

  [[nodiscard]] const SearchSpace& bounding_box() const { return box_; }

  /// Feasible segment of axis `axis` through x with the other coordinates held
  /// fixed. May be empty (first > second) when x itself is infeasible.
  [[nodiscard]] std::pair<double, double> axis_interval(const Point& x, int axis) const;

  /// Copy with one extra inequality row appended, re-certified.
  [[nodiscard]] Hypothesis with_inequality(const Eigen::RowVectorXd& row, double rhs,
                                           std::string label) const;

 private:
  bool satisfies(const Point& x, const Eigen::VectorXd& eq_tols) const;
  void build_box();

  std::string label_;
  SearchSpace space_;
  Eigen::MatrixXd eq_lhs_;
  Eigen::VectorXd eq_rhs_;
  Eigen::MatrixXd ineq_lhs_;
  Eigen::VectorXd ineq_rhs_;
  Eigen::VectorXd default_eq_tols_;
  std::vector<bool> pinned_;
  SearchSpace box_;
};

/// Observations of d inside h, order preserved. Without eq_tol the default
/// per-row tolerance applies.
[[nodiscard]] Dataset filter_dataset(const Hypothesis& h, const Dataset& d,
                                     std::optional<double> eq_tol = std::nullopt);

}  // namespace hypbo
