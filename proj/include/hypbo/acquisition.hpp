#pragma once

#include <span>
#include <vector>

#include "hypbo/gp.hpp"
#include "hypbo/rng.hpp"
#include "hypbo/search_space.hpp"

namespace hypbo {

enum class AcquisitionKind { expected_improvement };

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::expected_improvement;
  /// Exploration offset xi subtracted from the improvement.
  double jitter = 0.0;
  int multistarts = 32;
  /// Total golden-section shrink iterations per refined start.
  int refine_steps = 64;

  void validate() const;
};

/// EI for maximization: with delta = mean - incumbent - jitter, returns
/// max(delta, 0) when stddev == 0, else delta Phi(delta/s) + s phi(delta/s).
[[nodiscard]] double expected_improvement(double mean, double stddev, double incumbent, double jitter);

struct Candidate {
  Point x;
  double acq_value = 0.0;
};

[[nodiscard]] double acquisition_value(const GPModel& model, const Point& x, double incumbent,
                                       const AcquisitionSpec& spec);

/// Multistart maximization of EI over a region: `multistarts` uniform
/// feasible draws plus Gaussian perturbations of each feasible anchor (the
/// best observations, where EI is concentrated late in a run), the top three refined by coordinate-wise golden-section
/// search along each axis's feasible segment. The result is inside the region,
/// at least as good as the best raw draw, and a pure function of the inputs
/// and the rng state.
[[nodiscard]] Candidate maximize_acquisition(const GPModel& model, const Hypothesis& region, double incumbent,
                                             const AcquisitionSpec& spec, Rng& rng,
                                             std::span<const Point> anchors = {});
[[nodiscard]] Candidate maximize_acquisition(const GPModel& model, const SearchSpace& region, double incumbent,
                                             const AcquisitionSpec& spec, Rng& rng,
                                             std::span<const Point> anchors = {});

/// Up to `count` observations of `data` with the largest y, best first.
[[nodiscard]] std::vector<Point> best_points(const Dataset& data, int count);

}  // namespace hypbo
