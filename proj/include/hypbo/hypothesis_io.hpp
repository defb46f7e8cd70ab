#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hypbo/search_space.hpp"

namespace hypbo {

enum class Relation { le, ge, eq };

/// Accumulates named-coefficient rows against a space with coordinate names.
/// `>=` rows are stored negated as `<=`; strict relations are stored non-strict.
class HypothesisBuilder {
 public:
  using Terms = std::vector<std::pair<std::string, double>>;

  explicit HypothesisBuilder(SearchSpace space) : space_(std::move(space)) {}

  HypothesisBuilder& add(const Terms& terms, Relation rel, double rhs);
  HypothesisBuilder& le(const Terms& terms, double rhs) { return add(terms, Relation::le, rhs); }
  HypothesisBuilder& ge(const Terms& terms, double rhs) { return add(terms, Relation::ge, rhs); }
  HypothesisBuilder& eq(const Terms& terms, double rhs) { return add(terms, Relation::eq, rhs); }

  /// Certifies; throws InfeasibleHypothesis or InvalidArgument.
  [[nodiscard]] Hypothesis build(std::string label) const;

 private:
  SearchSpace space_;
  std::vector<Eigen::RowVectorXd> eq_rows_;
  std::vector<double> eq_rhs_;
  std::vector<Eigen::RowVectorXd> ineq_rows_;
  std::vector<double> ineq_rhs_;
};

[[nodiscard]] Relation parse_relation(std::string_view op);

/// Hypothesis definition document:
///
///   { "label": "farm",
///     "space": {"names": ["Water", ...], "lower": [...], "upper": [...]},
///     "eq":   [[{"P10": 1}, "=", 5]],
///     "ineq": [[{"Water": -1}, "<=", -1.5], [{"MB": 1, "RB": 1}, ">", 3]] }
///
/// Unnamed coefficients are 0. `space` may be omitted when `default_space`
/// is given. A top-level array holds several hypotheses. Throws SchemaError.
[[nodiscard]] std::vector<Hypothesis> parse_hypotheses(const nlohmann::json& doc,
                                                       const std::optional<SearchSpace>& default_space = std::nullopt);
[[nodiscard]] std::vector<Hypothesis> load_hypotheses(const std::filesystem::path& path,
                                                      const std::optional<SearchSpace>& default_space = std::nullopt);

}  // namespace hypbo
