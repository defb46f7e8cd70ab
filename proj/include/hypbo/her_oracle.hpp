#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypbo/gp.hpp"
#include "hypbo/search_space.hpp"

namespace hypbo::her {

/// Column order of the ten-component photocatalysis space.
inline constexpr std::array<std::string_view, 10> kComponents = {"P10", "Cys", "MB",   "RB",  "AR87",
                                                                 "NaOH", "NaCl", "SDS", "PVP", "NaDS"};
inline constexpr std::string_view kTargetColumn = "HER";

/// P10 in [1, 5] mg, every liquid in [0, 5] mL.
[[nodiscard]] SearchSpace space();

/// 0.5 mg for P10, 0.25 mL for the liquids.
[[nodiscard]] Eigen::VectorXd default_steps();

/// Reads {"steps": {"P10": 0.5, ...}} and overrides the named entries of `base`.
[[nodiscard]] Eigen::VectorXd load_step_overrides(const std::filesystem::path& path, Eigen::VectorXd base);

struct HerDataset {
  std::vector<Point> compositions;
  std::vector<double> her;
  Eigen::VectorXd steps = default_steps();

  [[nodiscard]] std::size_t size() const { return her.size(); }
  [[nodiscard]] Dataset observations() const;
};

/// CSV with header P10,Cys,MB,RB,AR87,NaOH,NaCl,SDS,PVP,NaDS,HER. Throws
/// SchemaError on a header mismatch, ParseError on a bad number, RangeError
/// (naming row and column) on an out-of-range value.
[[nodiscard]] HerDataset parse_csv(std::istream& in);
[[nodiscard]] HerDataset load_csv(const std::filesystem::path& path);
void write_csv(const HerDataset& d, std::ostream& out);

/// GP emulator of the hydrogen evolution rate: zero-mean Matérn-5/2 with
/// constant scaling and optimized homoscedastic noise, lengthscales started
/// at the discretization steps. evaluate() is the posterior mean.
class OracleModel {
 public:
  /// Throws InvalidData for fewer than two rows.
  static OracleModel fit(const HerDataset& d, Rng& rng, int restarts = 5);

  /// Throws InvalidArgument for compositions outside the space.
  [[nodiscard]] double evaluate(const Point& composition) const;
  [[nodiscard]] std::vector<double> evaluate_batch(std::span<const Point> compositions) const;

  [[nodiscard]] const GPModel& gp() const { return gp_; }
  [[nodiscard]] const SearchSpace& space() const { return space_; }
  [[nodiscard]] const KernelParams& initial_params() const { return init_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  OracleModel(GPModel gp, KernelParams init, std::vector<std::string> warnings)
      : gp_(std::move(gp)), init_(std::move(init)), space_(her::space()), warnings_(std::move(warnings)) {}

  GPModel gp_;
  KernelParams init_;
  SearchSpace space_;
  std::vector<std::string> warnings_;
};

enum class HypothesisSet { what_they_knew, perfect_hindsight, bizarro_world, virtual_chemists };

[[nodiscard]] HypothesisSet parse_hypothesis_set(std::string_view name);

/// The retrospective sets are one hypothesis each; virtual_chemists is nine.
[[nodiscard]] std::vector<Hypothesis> chemistry_hypotheses(HypothesisSet set);

/// Adds "total liquid volume <= cap" to h. The result is often too thin for
/// rejection certification, in which case InfeasibleHypothesis is thrown.
[[nodiscard]] Hypothesis with_volume_cap(const Hypothesis& h, double cap = 5.0);

/// Noise-free stand-in surface: rises with P10, peaks in Cys and NaOH,
/// strongly suppressed by the three dyes, mildly by the surfactants.
[[nodiscard]] double standin_surface(const Point& composition);

/// Grid-sampled compositions (each liquid is absent with probability 1/2)
/// labelled with standin_surface plus N(0, noise_sd^2), clipped at 0.
[[nodiscard]] HerDataset generate_standin(int rows, Rng& rng, double noise_sd = 0.1);

/// Uniform draw on the discretization grid.
[[nodiscard]] Point sample_grid(const Eigen::VectorXd& steps, Rng& rng);

}  // namespace hypbo::her
