#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypbo/acquisition.hpp"
#include "hypbo/dataset.hpp"
#include "hypbo/gp.hpp"
#include "hypbo/search_space.hpp"

namespace hypbo {

/// Which incumbent the lower level's local EI is measured against.
enum class LocalIncumbent {
  global,  ///< y_max over the whole dataset
  local,   ///< best y among the points inside the hypothesis
};

/// Surrogate settings shared by the local and global GPs.
struct SurrogateConfig {
  int restarts = 5;
  bool ard = true;
  bool standardize_targets = true;
  /// Fixed observation noise in objective units; rescaled by the target
  /// standardization before it enters the kernel.
  double noise_variance = 1e-6;
  double initial_lengthscale = 1.0;
  /// 0 picks the fit_gp default.
  int max_evals_per_restart = 0;
  /// Below this many observations the initial parameters are used verbatim;
  /// the marginal likelihood of so few points collapses the lengthscales.
  int min_points_to_optimize = 3;
};

struct EngineConfig {
  int n_init = 5;
  int i_max = 100;
  double gamma = 0.0;
  int top_seeds = 1;
  int l_max = 2;
  int u_max = 5;
  std::uint64_t seed = 0;
  AcquisitionSpec acquisition;
  /// Hyperparameters are re-optimized every this many iterations; between
  /// re-optimizations the previous parameters are reused.
  int gp_optimize_every = 1;
  SurrogateConfig surrogate;
  LocalIncumbent local_incumbent = LocalIncumbent::global;

  /// Throws InvalidArgument for values outside their domains.
  void validate() const;
};

enum class Source { init_hypothesis, init_global, lower, upper };

[[nodiscard]] std::string_view source_name(Source s);
[[nodiscard]] Source parse_source(std::string_view name);

struct TraceRecord {
  int iteration = 0;  ///< 0 for the initial design, then the 1-based budget unit
  Source source = Source::init_global;
  int hypothesis = -1;  ///< index into the run's hypothesis list, -1 if none
  Point x;
  double y = 0.0;
  double incumbent_after = 0.0;
  std::optional<double> acq_value;
  int l = 0;
  int u = 0;
};

struct Trace {
  int dim = 0;
  std::vector<std::string> hypothesis_labels;
  std::vector<TraceRecord> records;

  [[nodiscard]] std::size_t init_count() const;
  /// Highest iteration value; equals i_max for a completed run.
  [[nodiscard]] int iterations() const;
};

using Objective = std::function<double(const Point&)>;

struct TaggedPoint {
  Source source;
  int hypothesis;
  Point x;
};

/// One uniform draw per hypothesis, then max(1, n - J) global draws.
[[nodiscard]] std::vector<TaggedPoint> initial_design(const SearchSpace& space,
                                                      std::span<const Hypothesis> hypotheses, int n, Rng& rng);

/// True iff y_new beats the plateau threshold: y_new > (1 + gamma) y_max for
/// y_max >= 0, y_new > (1 - gamma) y_max for y_max < 0.
[[nodiscard]] bool improved(double y_max, double y_new, double gamma);

struct Seed {
  int hypothesis = -1;
  Point x;
  double acq_value = 0.0;
};

/// Fits one local GP per hypothesis on the observations inside it (the prior
/// when none are), maximizes EI inside the hypothesis, and returns the T
/// candidates with the largest EI, ties resolved by hypothesis index.
/// Hypothesis j draws from its own stream derive_seed(stream, j), so the
/// local fits may run concurrently without affecting the result.
/// `warm` holds per-hypothesis parameters to reuse when `reoptimize` is false;
/// it is updated with the parameters actually used.
[[nodiscard]] std::vector<Seed> lower_step(const Dataset& data, std::span<const Hypothesis> hypotheses, int top,
                                           const AcquisitionSpec& spec, const SurrogateConfig& surrogate,
                                           LocalIncumbent incumbent, std::uint64_t stream,
                                           std::vector<std::optional<KernelParams>>* warm = nullptr,
                                           bool reoptimize = true);

/// Fits the global GP on all of `data` and maximizes EI over the box.
[[nodiscard]] Candidate upper_step(const Dataset& data, const SearchSpace& space, const AcquisitionSpec& spec,
                                   const SurrogateConfig& surrogate, Rng& rng,
                                   std::optional<KernelParams>* warm = nullptr, bool reoptimize = true);

/// The bilevel loop. With no hypotheses the lower level never runs and the
/// result is plain GP-BO. Throws ObjectiveError when f returns a non-finite
/// value.
[[nodiscard]] Trace run_hypbo(const Objective& f, const SearchSpace& space, std::span<const Hypothesis> hypotheses,
                              const EngineConfig& config);

/// Baselines sharing the engine's seeding: n global initial draws, then
/// i_max evaluations.
[[nodiscard]] Trace run_vanilla_bo(const Objective& f, const SearchSpace& space, const EngineConfig& config);
[[nodiscard]] Trace run_random_search(const Objective& f, const SearchSpace& space, const EngineConfig& config);

}  // namespace hypbo
