#pragma once

#include <string>
#include <string_view>

#include "hypbo/search_space.hpp"

namespace hypbo {

enum class TestFunction { ackley, levy, branin, sphere };

/// A classical minimization benchmark in maximization form: evaluate()
/// returns the negated function value, so the optimum is a maximum.
struct ObjectiveSpec {
  TestFunction function = TestFunction::sphere;
  int dim = 1;
  SearchSpace bounds = SearchSpace::cube(1, 0.0, 1.0);
  Point optimum_x;
  double optimum_value = 0.0;

  [[nodiscard]] std::string key() const;
};

/// Canonical domains: Ackley [-32.768, 32.768]^d, Levy [-10, 10]^d,
/// Branin [-5, 10] x [0, 15] (d = 2 only), Sphere [-5.12, 5.12]^d.
[[nodiscard]] ObjectiveSpec make_objective(TestFunction function, int dim);

/// Registry lookup by "name:dim", e.g. "ackley:9". Throws InvalidArgument.
[[nodiscard]] ObjectiveSpec parse_objective_key(std::string_view key);

[[nodiscard]] std::string_view function_name(TestFunction f);

/// Throws InvalidArgument when x is outside spec.bounds.
[[nodiscard]] double evaluate(const ObjectiveSpec& spec, const Point& x);

enum class HypothesisQuality { good, weak, poor };

[[nodiscard]] HypothesisQuality parse_quality(std::string_view name);
[[nodiscard]] std::string_view quality_name(HypothesisQuality q);

/// Axis-aligned box of side `width` clipped to the domain, centered per
/// coordinate at opt (good), opt - 0.2 (opt - lb) - w/2 (weak), or lb + w/2
/// (poor).
[[nodiscard]] Hypothesis make_quality_hypothesis(const ObjectiveSpec& spec, HypothesisQuality quality,
                                                 double width = 2.0);

}  // namespace hypbo
