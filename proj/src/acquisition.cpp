#include "hypbo/acquisition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "hypbo/errors.hpp"
#include "hypbo/kernels.hpp"

namespace hypbo {

namespace {

constexpr int kRefinedStarts = 3;
constexpr std::array<double, 5> kAnchorScales = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
constexpr int kDrawsPerScale = 2;
constexpr double kInvPhi = 0.6180339887498949;

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

template <typename Region>
class Refiner {
 public:
  Refiner(const GPModel& model, const Region& region, double incumbent, const AcquisitionSpec& spec)
      : model_(model), region_(region), incumbent_(incumbent), spec_(spec) {}

  double value(const Point& x) const {
    if (!region_.contains(x)) return -std::numeric_limits<double>::infinity();
    return acquisition_value(model_, x, incumbent_, spec_);
  }

  Candidate refine(Candidate start) const {
    const SearchSpace& box = region_.bounding_box();
    std::vector<int> free_axes;
    for (int k = 0; k < box.dim(); ++k) {
      if (box.upper()(k) > box.lower()(k)) free_axes.push_back(k);
    }
    if (free_axes.empty() || spec_.refine_steps == 0) return start;

    const int nfree = static_cast<int>(free_axes.size());
    const int per_line = std::clamp(spec_.refine_steps / (2 * nfree), 2, 8);
    Eigen::VectorXd radius = 0.5 * (box.upper() - box.lower());
    int budget = spec_.refine_steps;
    while (budget > 0) {
      for (int k : free_axes) {
        if (budget <= 0) break;
        const int steps = std::min(per_line, budget);
        budget -= steps;
        line_search(start, k, radius(k), steps);
      }
      radius *= kInvPhi;
    }
    return start;
  }

 private:
  // Golden-section maximization along one axis, restricted to the feasible
  // segment within `radius` of the current coordinate. Keeps the incumbent
  // point unless a strictly better one is found.
  void line_search(Candidate& cur, int axis, double radius, int steps) const {
    auto [lo, hi] = region_.axis_interval(cur.x, axis);
    lo = std::max(lo, cur.x(axis) - radius);
    hi = std::min(hi, cur.x(axis) + radius);
    if (!(hi > lo)) return;

    Point probe = cur.x;
    auto f = [&](double t) {
      probe(axis) = t;
      return value(probe);
    };
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < steps; ++it) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = f(d);
      }
    }
    const double t = fc >= fd ? c : d;
    const double ft = std::max(fc, fd);
    if (ft > cur.acq_value) {
      cur.x(axis) = t;
      cur.acq_value = ft;
    }
  }

  const GPModel& model_;
  const Region& region_;
  double incumbent_;
  const AcquisitionSpec& spec_;
};

template <typename Region>
Candidate maximize_impl(const GPModel& model, const Region& region, double incumbent, const AcquisitionSpec& spec,
                        Rng& rng, std::span<const Point> anchors) {
  spec.validate();
  std::vector<Point> starts;
  starts.reserve(static_cast<std::size_t>(spec.multistarts));
  for (int i = 0; i < spec.multistarts; ++i) starts.push_back(region.sample_uniform(rng));
  const SearchSpace& box = region.bounding_box();
  const Eigen::VectorXd width = box.upper() - box.lower();
  for (const Point& a : anchors) {
    if (!region.contains(a)) continue;
    for (double scale : kAnchorScales) {
      for (int r = 0; r < kDrawsPerScale; ++r) {
        Point p = a;
        for (int k = 0; k < p.size(); ++k) {
          p(k) = std::clamp(a(k) + scale * width(k) * rng.normal(), box.lower()(k), box.upper()(k));
        }
        if (region.contains(p)) starts.push_back(std::move(p));
      }
    }
  }

  const std::vector<Prediction> preds = model.predict_batch(starts);
  std::vector<double> means(preds.size());
  std::vector<double> sds(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    means[i] = preds[i].mean;
    sds[i] = std::sqrt(preds[i].variance);
  }
  std::vector<double> ei(preds.size());
  kernels::expected_improvement_batch(means, sds, incumbent, spec.jitter, ei);

  std::vector<std::size_t> order(starts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ei[a] > ei[b]; });

  const Refiner<Region> refiner(model, region, incumbent, spec);
  Candidate best{starts[order.front()], ei[order.front()]};
  const std::size_t refined = std::min<std::size_t>(kRefinedStarts, order.size());
  for (std::size_t r = 0; r < refined; ++r) {
    Candidate c = refiner.refine({starts[order[r]], ei[order[r]]});
    if (c.acq_value > best.acq_value) best = std::move(c);
  }
  return best;
}

}  // namespace

void AcquisitionSpec::validate() const {
  if (multistarts < 1) throw InvalidArgument("acquisition: multistarts must be >= 1");
  if (refine_steps < 0) throw InvalidArgument("acquisition: refine_steps must be >= 0");
  if (!(jitter >= 0.0)) throw InvalidArgument("acquisition: jitter must be nonnegative");
}

double expected_improvement(double mean, double stddev, double incumbent, double jitter) {
  const double delta = mean - incumbent - jitter;
  if (!(stddev > 0.0)) return std::max(delta, 0.0);
  const double z = delta / stddev;
  return std::max(0.0, delta * normal_cdf(z) + stddev * normal_pdf(z));
}

double acquisition_value(const GPModel& model, const Point& x, double incumbent, const AcquisitionSpec& spec) {
  const Prediction p = model.predict(x);
  return expected_improvement(p.mean, std::sqrt(p.variance), incumbent, spec.jitter);
}

Candidate maximize_acquisition(const GPModel& model, const Hypothesis& region, double incumbent,
                               const AcquisitionSpec& spec, Rng& rng, std::span<const Point> anchors) {
  return maximize_impl(model, region, incumbent, spec, rng, anchors);
}

Candidate maximize_acquisition(const GPModel& model, const SearchSpace& region, double incumbent,
                               const AcquisitionSpec& spec, Rng& rng, std::span<const Point> anchors) {
  return maximize_impl(model, region, incumbent, spec, rng, anchors);
}

std::vector<Point> best_points(const Dataset& data, int count) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return data.y(a) > data.y(b); });
  std::vector<Point> out;
  for (std::size_t i = 0; i < order.size() && static_cast<int>(i) < count; ++i) out.push_back(data.x(order[i]));
  return out;
}

}  // namespace hypbo
