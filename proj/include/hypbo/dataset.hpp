#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace hypbo {

using Point = Eigen::VectorXd;

/// Append-only observation record with a running incumbent.
class Dataset {
 public:
  Dataset() = default;

  /// Throws InvalidData on non-finite y or on a dimension change.
  void append(Point x, double y);

  [[nodiscard]] std::size_t size() const { return ys_.size(); }
  [[nodiscard]] bool empty() const { return ys_.empty(); }
  [[nodiscard]] int dim() const { return xs_.empty() ? 0 : static_cast<int>(xs_.front().size()); }

  [[nodiscard]] const Point& x(std::size_t i) const { return xs_[i]; }
  [[nodiscard]] double y(std::size_t i) const { return ys_[i]; }
  [[nodiscard]] const std::vector<Point>& xs() const { return xs_; }
  [[nodiscard]] const std::vector<double>& ys() const { return ys_; }

  /// -inf when empty.
  [[nodiscard]] double y_max() const { return y_max_; }
  /// First maximizing index; -1 when empty.
  [[nodiscard]] long argmax_index() const { return argmax_; }

 private:
  std::vector<Point> xs_;
  std::vector<double> ys_;
  double y_max_ = -std::numeric_limits<double>::infinity();
  long argmax_ = -1;
};

}  // namespace hypbo
