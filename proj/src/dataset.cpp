#include "hypbo/dataset.hpp"

#include <cmath>
#include <string>

#include "hypbo/errors.hpp"

namespace hypbo {

void Dataset::append(Point x, double y) {
  if (!std::isfinite(y)) throw InvalidData("dataset: non-finite target");
  if (!xs_.empty() && x.size() != xs_.front().size()) {
    throw InvalidData("dataset: point dimension " + std::to_string(x.size()) + " != " +
                      std::to_string(xs_.front().size()));
  }
  xs_.push_back(std::move(x));
  ys_.push_back(y);
  if (y > y_max_) {
    y_max_ = y;
    argmax_ = static_cast<long>(ys_.size()) - 1;
  }
}

}  // namespace hypbo
