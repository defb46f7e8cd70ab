#include "hypbo/hypothesis_io.hpp"

#include <fstream>

#include "hypbo/errors.hpp"

namespace hypbo {

HypothesisBuilder& HypothesisBuilder::add(const Terms& terms, Relation rel, double rhs) {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(space_.dim());
  for (const auto& [name, coeff] : terms) row(space_.index_of(name)) += coeff;
  switch (rel) {
    case Relation::le:
      ineq_rows_.push_back(row);
      ineq_rhs_.push_back(rhs);
      break;
    case Relation::ge:
      ineq_rows_.push_back(-row);
      ineq_rhs_.push_back(-rhs);
      break;
    case Relation::eq:
      eq_rows_.push_back(row);
      eq_rhs_.push_back(rhs);
      break;
  }
  return *this;
}

Hypothesis HypothesisBuilder::build(std::string label) const {
  const int d = space_.dim();
  auto stack = [d](const std::vector<Eigen::RowVectorXd>& rows, const std::vector<double>& rhs) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), d);
    Eigen::VectorXd v(static_cast<Eigen::Index>(rhs.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      m.row(static_cast<Eigen::Index>(i)) = rows[i];
      v(static_cast<Eigen::Index>(i)) = rhs[i];
    }
    return std::pair{m, v};
  };
  auto [a, b] = stack(eq_rows_, eq_rhs_);
  auto [bm, c] = stack(ineq_rows_, ineq_rhs_);
  return Hypothesis(std::move(label), space_, std::move(a), std::move(b), std::move(bm), std::move(c));
}

Relation parse_relation(std::string_view op) {
  if (op == "<=" || op == "<") return Relation::le;
  if (op == ">=" || op == ">") return Relation::ge;
  if (op == "=" || op == "==") return Relation::eq;
  throw SchemaError("hypothesis: unknown relation '" + std::string(op) + "'");
}

namespace {

SearchSpace parse_space(const nlohmann::json& j) {
  try {
    auto names = j.at("names").get<std::vector<std::string>>();
    auto lo = j.at("lower").get<std::vector<double>>();
    auto hi = j.at("upper").get<std::vector<double>>();
    return SearchSpace(Eigen::Map<Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size())),
                       Eigen::Map<Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size())),
                       std::move(names));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("hypothesis space: ") + e.what());
  }
}

void add_rows(HypothesisBuilder& b, const nlohmann::json& rows, bool equality) {
  if (!rows.is_array()) throw SchemaError("hypothesis: rows must be an array");
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_object() || !row[1].is_string() || !row[2].is_number()) {
      throw SchemaError("hypothesis: each row must be [{name: coeff, ...}, op, rhs]");
    }
    HypothesisBuilder::Terms terms;
    for (const auto& [name, coeff] : row[0].items()) {
      if (!coeff.is_number()) throw SchemaError("hypothesis: coefficient for '" + name + "' is not a number");
      terms.emplace_back(name, coeff.get<double>());
    }
    const Relation rel = parse_relation(row[1].get<std::string>());
    if (equality != (rel == Relation::eq)) {
      throw SchemaError(equality ? "hypothesis: 'eq' rows must use '='" : "hypothesis: 'ineq' rows cannot use '='");
    }
    b.add(terms, rel, row[2].get<double>());
  }
}

Hypothesis parse_one(const nlohmann::json& j, const std::optional<SearchSpace>& default_space) {
  if (!j.is_object()) throw SchemaError("hypothesis: expected an object");
  if (!j.contains("label") || !j["label"].is_string()) throw SchemaError("hypothesis: missing string 'label'");
  std::optional<SearchSpace> space = default_space;
  if (j.contains("space")) space = parse_space(j["space"]);
  if (!space) throw SchemaError("hypothesis: no 'space' given");
  if (space->names().empty()) throw SchemaError("hypothesis: space needs coordinate names");

  HypothesisBuilder b(*space);
  try {
    if (j.contains("eq")) add_rows(b, j["eq"], true);
    if (j.contains("ineq")) add_rows(b, j["ineq"], false);
  } catch (const InvalidArgument& e) {
    throw SchemaError(e.what());
  }
  return b.build(j["label"].get<std::string>());
}

}  // namespace

std::vector<Hypothesis> parse_hypotheses(const nlohmann::json& doc, const std::optional<SearchSpace>& default_space) {
  std::vector<Hypothesis> out;
  if (doc.is_array()) {
    for (const auto& j : doc) out.push_back(parse_one(j, default_space));
  } else {
    out.push_back(parse_one(doc, default_space));
  }
  return out;
}

std::vector<Hypothesis> load_hypotheses(const std::filesystem::path& path,
                                        const std::optional<SearchSpace>& default_space) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open hypothesis file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("hypothesis file " + path.string() + ": " + e.what());
  }
  return parse_hypotheses(doc, default_space);
}

}  // namespace hypbo
