#include "hypbo/objectives.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "hypbo/errors.hpp"

namespace hypbo {

namespace {

using std::numbers::pi;

double ackley(const Point& x) {
  constexpr double a = 20.0;
  constexpr double b = 0.2;
  constexpr double c = 2.0 * pi;
  const auto d = static_cast<double>(x.size());
  const double sq = x.squaredNorm() / d;
  const double cs = (c * x.array()).cos().sum() / d;
  return -a * std::exp(-b * std::sqrt(sq)) - std::exp(cs) + a + std::numbers::e;
}

double levy(const Point& x) {
  const Eigen::ArrayXd w = 1.0 + (x.array() - 1.0) / 4.0;
  const Eigen::Index d = w.size();
  const double first = std::pow(std::sin(pi * w(0)), 2);
  double mid = 0.0;
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    mid += (w(i) - 1.0) * (w(i) - 1.0) * (1.0 + 10.0 * std::pow(std::sin(pi * w(i) + 1.0), 2));
  }
  const double wd = w(d - 1);
  const double last = (wd - 1.0) * (wd - 1.0) * (1.0 + std::pow(std::sin(2.0 * pi * wd), 2));
  return first + mid + last;
}

double branin(const Point& x) {
  constexpr double a = 1.0;
  constexpr double b = 5.1 / (4.0 * pi * pi);
  constexpr double c = 5.0 / pi;
  constexpr double r = 6.0;
  constexpr double s = 10.0;
  constexpr double t = 1.0 / (8.0 * pi);
  const double q = x(1) - b * x(0) * x(0) + c * x(0) - r;
  return a * q * q + s * (1.0 - t) * std::cos(x(0)) + s;
}

double sphere(const Point& x) { return x.squaredNorm(); }

double raw_value(TestFunction f, const Point& x) {
  switch (f) {
    case TestFunction::ackley:
      return ackley(x);
    case TestFunction::levy:
      return levy(x);
    case TestFunction::branin:
      return branin(x);
    case TestFunction::sphere:
      return sphere(x);
  }
  return 0.0;
}

}  // namespace

std::string_view function_name(TestFunction f) {
  switch (f) {
    case TestFunction::ackley:
      return "ackley";
    case TestFunction::levy:
      return "levy";
    case TestFunction::branin:
      return "branin";
    case TestFunction::sphere:
      return "sphere";
  }
  return "sphere";
}

std::string ObjectiveSpec::key() const { return std::string(function_name(function)) + ":" + std::to_string(dim); }

ObjectiveSpec make_objective(TestFunction function, int dim) {
  if (dim < 1) throw InvalidArgument("objective: dim must be >= 1");
  ObjectiveSpec spec;
  spec.function = function;
  spec.dim = dim;
  switch (function) {
    case TestFunction::ackley:
      spec.bounds = SearchSpace::cube(dim, -32.768, 32.768);
      spec.optimum_x = Point::Zero(dim);
      break;
    case TestFunction::levy:
      spec.bounds = SearchSpace::cube(dim, -10.0, 10.0);
      spec.optimum_x = Point::Ones(dim);
      break;
    case TestFunction::branin: {
      if (dim != 2) throw InvalidArgument("objective: branin is defined for dim = 2 only");
      Eigen::VectorXd lo(2), hi(2);
      lo << -5.0, 0.0;
      hi << 10.0, 15.0;
      spec.bounds = SearchSpace(lo, hi);
      spec.optimum_x = Point(2);
      spec.optimum_x << pi, 2.275;
      break;
    }
    case TestFunction::sphere:
      spec.bounds = SearchSpace::cube(dim, -5.12, 5.12);
      spec.optimum_x = Point::Zero(dim);
      break;
  }
  std::vector<std::string> names;
  for (int k = 0; k < dim; ++k) names.push_back("x" + std::to_string(k));
  spec.bounds = SearchSpace(spec.bounds.lower(), spec.bounds.upper(), std::move(names));
  spec.optimum_value = -raw_value(function, spec.optimum_x);
  return spec;
}

ObjectiveSpec parse_objective_key(std::string_view key) {
  const auto colon = key.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("objective key must look like name:dim");
  const std::string_view name = key.substr(0, colon);
  const std::string_view dim_text = key.substr(colon + 1);
  int dim = 0;
  const auto [ptr, ec] = std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), dim);
  if (ec != std::errc() || ptr != dim_text.data() + dim_text.size()) {
    throw InvalidArgument("objective key: bad dimension '" + std::string(dim_text) + "'");
  }
  for (TestFunction f : {TestFunction::ackley, TestFunction::levy, TestFunction::branin, TestFunction::sphere}) {
    if (function_name(f) == name) return make_objective(f, dim);
  }
  throw InvalidArgument("objective key: unknown function '" + std::string(name) + "'");
}

double evaluate(const ObjectiveSpec& spec, const Point& x) {
  if (!spec.bounds.contains(x)) throw InvalidArgument("objective: point outside bounds");
  return -raw_value(spec.function, x);
}

HypothesisQuality parse_quality(std::string_view name) {
  if (name == "good") return HypothesisQuality::good;
  if (name == "weak") return HypothesisQuality::weak;
  if (name == "poor") return HypothesisQuality::poor;
  throw InvalidArgument("unknown hypothesis quality '" + std::string(name) + "'");
}

std::string_view quality_name(HypothesisQuality q) {
  switch (q) {
    case HypothesisQuality::good:
      return "good";
    case HypothesisQuality::weak:
      return "weak";
    case HypothesisQuality::poor:
      return "poor";
  }
  return "good";
}

Hypothesis make_quality_hypothesis(const ObjectiveSpec& spec, HypothesisQuality quality, double width) {
  if (!(width > 0.0)) throw InvalidArgument("quality hypothesis: width must be positive");
  const SearchSpace& b = spec.bounds;
  Eigen::VectorXd lo(spec.dim), hi(spec.dim);
  for (int i = 0; i < spec.dim; ++i) {
    const double lb = b.lower()(i);
    const double opt = spec.optimum_x(i);
    double center = opt;
    if (quality == HypothesisQuality::poor) center = lb + width / 2.0;
    if (quality == HypothesisQuality::weak) center = opt - 0.2 * (opt - lb) - width / 2.0;
    lo(i) = std::max(b.lower()(i), center - width / 2.0);
    hi(i) = std::min(b.upper()(i), center + width / 2.0);
    if (!(lo(i) < hi(i))) throw InvalidArgument("quality hypothesis: box falls outside the domain");
  }
  return Hypothesis::box(std::string(quality_name(quality)), b, lo, hi);
}

}  // namespace hypbo
