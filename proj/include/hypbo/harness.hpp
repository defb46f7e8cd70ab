#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypbo/engine.hpp"
#include "hypbo/her_oracle.hpp"

namespace hypbo {

enum class Method { hypbo, vanilla_bo, random_search };

[[nodiscard]] std::string_view method_name(Method m);
[[nodiscard]] Method parse_method(std::string_view name);

enum class Band { standard_error, standard_deviation };

/// What to optimize. Exactly one of `key`, `her_csv` and `her_standin` is set.
struct ObjectiveSource {
  std::string key;                         ///< registry key such as "sphere:2"
  std::optional<std::filesystem::path> her_csv;
  int her_standin = 0;                     ///< rows of a generated stand-in dataset
  std::optional<std::filesystem::path> steps;  ///< discretization-step sidecar
  std::uint64_t oracle_seed = 0;
  int oracle_restarts = 5;
};

struct ExperimentConfig {
  ObjectiveSource objective;
  /// Factory keys (good, weak, poor, what_they_knew, perfect_hindsight,
  /// bizarro_world, virtual_chemists) or paths to hypothesis JSON files.
  std::vector<std::string> hypotheses;
  double hypothesis_width = 2.0;
  bool volume_cap = false;
  std::vector<Method> methods = {Method::hypbo, Method::vanilla_bo, Method::random_search};
  int trials = 1;
  EngineConfig engine;
  std::filesystem::path output_dir = "hypbo_out";
  Band band = Band::standard_error;

  /// Throws ConfigError.
  void validate() const;
};

/// INI text with sections [objective], [hypotheses], [engine], [methods],
/// [output]. Relative paths resolve against `base_dir`. Throws ConfigError.
[[nodiscard]] ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// A resolved optimization problem.
struct Problem {
  std::string name;
  SearchSpace space = SearchSpace::cube(1, 0.0, 1.0);
  Objective objective;
  std::vector<Hypothesis> hypotheses;
  /// Known optimum for synthetic objectives; empty for the oracle.
  std::optional<double> optimum;
  std::shared_ptr<const her::OracleModel> oracle;
};

/// Builds the objective and hypotheses. Throws ConfigError for unknown keys
/// or unreadable files.
[[nodiscard]] Problem resolve_problem(const ExperimentConfig& cfg);

/// Max oracle prediction over `samples` grid draws from a fixed stream.
[[nodiscard]] double oracle_grid_optimum(const her::OracleModel& oracle, int samples, std::uint64_t seed);

struct MethodRuns {
  Method method;
  std::vector<Trace> traces;  ///< index = trial
};

struct ExperimentResult {
  std::vector<MethodRuns> runs;
  nlohmann::json summary;
};

/// Trial t of every method uses engine seed master + t. Trials run on a
/// bounded worker pool (HYPBO_THREADS caps it) and merge in (method, trial)
/// order. Writes traces/<method>_trial<t>.csv, manifest.json, summary.json
/// and the regret plots under cfg.output_dir. A failing trial aborts with
/// its method, trial and seed in the message.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& cfg);
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& cfg, const Problem& problem);

/// Per-method regret curves, final regrets and paired signed-rank tests of
/// hypbo against each other method (raw and Bonferroni-adjusted at 0.05).
[[nodiscard]] nlohmann::json summarize(const std::vector<MethodRuns>& runs, double optimum,
                                       const std::string& optimum_source, Band band);

/// Rebuilds summary.json and the plots from an output directory's traces.
[[nodiscard]] nlohmann::json report(const std::filesystem::path& output_dir);

/// Worker count: available parallelism, capped by HYPBO_THREADS when set.
[[nodiscard]] int worker_count();

}  // namespace hypbo
