#include "hypbo/her_oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hypbo/errors.hpp"
#include "hypbo/hypothesis_io.hpp"

namespace hypbo::her {

namespace {

constexpr int kDims = static_cast<int>(kComponents.size());
constexpr double kInitialNoise = 1e-2;

std::vector<std::string> component_names() { return {kComponents.begin(), kComponents.end()}; }

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, std::size_t row, std::string_view column) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  while (begin < end && *begin == ' ') ++begin;
  while (end > begin && end[-1] == ' ') --end;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (begin == end || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError("HER csv row " + std::to_string(row) + ", column " + std::string(column) + ": cannot parse '" +
                     text + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SearchSpace space() {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(kDims);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(kDims, 5.0);
  lo(0) = 1.0;
  return SearchSpace(lo, hi, component_names());
}

Eigen::VectorXd default_steps() {
  Eigen::VectorXd s = Eigen::VectorXd::Constant(kDims, 0.25);
  s(0) = 0.5;
  return s;
}

Eigen::VectorXd load_step_overrides(const std::filesystem::path& path, Eigen::VectorXd base) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open step sidecar " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("step sidecar " + path.string() + ": " + e.what());
  }
  if (!doc.contains("steps") || !doc["steps"].is_object()) throw SchemaError("step sidecar: missing 'steps' object");
  const SearchSpace s = space();
  for (const auto& [name, value] : doc["steps"].items()) {
    const auto idx = s.find(name);
    if (!idx) throw SchemaError("step sidecar: unknown component '" + name + "'");
    if (!value.is_number() || !(value.get<double>() > 0.0)) {
      throw SchemaError("step sidecar: step for '" + name + "' must be a positive number");
    }
    base(*idx) = value.get<double>();
  }
  return base;
}

Dataset HerDataset::observations() const {
  Dataset d;
  for (std::size_t i = 0; i < size(); ++i) d.append(compositions[i], her[i]);
  return d;
}

HerDataset parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("HER csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_commas(line);
  std::vector<std::string> expected = component_names();
  expected.emplace_back(kTargetColumn);
  if (header != expected) {
    for (const auto& h : header) {
      if (std::find(expected.begin(), expected.end(), h) == expected.end()) {
        throw SchemaError("HER csv: unexpected column '" + h + "'");
      }
    }
    throw SchemaError("HER csv: header must be exactly P10,Cys,MB,RB,AR87,NaOH,NaCl,SDS,PVP,NaDS,HER");
  }

  const SearchSpace s = space();
  HerDataset out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const std::vector<std::string> cells = split_commas(line);
    if (cells.size() != expected.size()) {
      throw SchemaError("HER csv row " + std::to_string(row) + ": expected " + std::to_string(expected.size()) +
                        " fields, got " + std::to_string(cells.size()));
    }
    Point x(kDims);
    for (int k = 0; k < kDims; ++k) {
      const double v = parse_number(cells[static_cast<std::size_t>(k)], row, kComponents[static_cast<std::size_t>(k)]);
      if (v < s.lower()(k) || v > s.upper()(k)) {
        throw RangeError("HER csv row " + std::to_string(row) + ", column " +
                         std::string(kComponents[static_cast<std::size_t>(k)]) + ": value " + format_number(v) +
                         " outside [" + format_number(s.lower()(k)) + ", " + format_number(s.upper()(k)) + "]");
      }
      x(k) = v;
    }
    const double y = parse_number(cells.back(), row, kTargetColumn);
    if (y < 0.0) {
      throw RangeError("HER csv row " + std::to_string(row) + ", column HER: negative rate " + format_number(y));
    }
    out.compositions.push_back(std::move(x));
    out.her.push_back(y);
  }
  return out;
}

HerDataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open HER csv " + path.string());
  return parse_csv(in);
}

void write_csv(const HerDataset& d, std::ostream& out) {
  for (std::size_t k = 0; k < kComponents.size(); ++k) out << kComponents[k] << ',';
  out << kTargetColumn << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (int k = 0; k < kDims; ++k) out << format_number(d.compositions[i](k)) << ',';
    out << format_number(d.her[i]) << '\n';
  }
}

OracleModel OracleModel::fit(const HerDataset& d, Rng& rng, int restarts) {
  if (d.size() < 2) throw InvalidData("HER oracle: need at least 2 rows");
  if (d.steps.size() != kDims || (d.steps.array() <= 0.0).any()) {
    throw InvalidArgument("HER oracle: steps must be 10 positive values");
  }
  std::vector<std::string> warnings;
  const Dataset obs = d.observations();
  const double first = obs.y(0);
  if (std::all_of(obs.ys().begin(), obs.ys().end(), [&](double y) { return y == first; })) {
    warnings.emplace_back("all HER values identical; fitted signal variance will be near zero");
  }

  KernelParams init;
  init.signal_variance = 1.0;
  init.lengthscales = d.steps;
  init.noise_variance = kInitialNoise;

  GPFitOptions opts;
  opts.optimize = true;
  opts.restarts = restarts;
  opts.ard = true;
  opts.optimize_noise = true;
  opts.standardize_targets = true;
  GPModel gp = fit_gp(obs, init, opts, rng);
  return OracleModel(std::move(gp), std::move(init), std::move(warnings));
}

double OracleModel::evaluate(const Point& composition) const {
  if (!space_.contains(composition)) throw InvalidArgument("HER oracle: composition outside the component ranges");
  return gp_.predict(composition).mean;
}

std::vector<double> OracleModel::evaluate_batch(std::span<const Point> compositions) const {
  for (const auto& c : compositions) {
    if (!space_.contains(c)) throw InvalidArgument("HER oracle: composition outside the component ranges");
  }
  return gp_.mean_batch(compositions);
}

HypothesisSet parse_hypothesis_set(std::string_view name) {
  if (name == "what_they_knew") return HypothesisSet::what_they_knew;
  if (name == "perfect_hindsight") return HypothesisSet::perfect_hindsight;
  if (name == "bizarro_world") return HypothesisSet::bizarro_world;
  if (name == "virtual_chemists") return HypothesisSet::virtual_chemists;
  throw InvalidArgument("unknown chemistry hypothesis set '" + std::string(name) + "'");
}

std::vector<Hypothesis> chemistry_hypotheses(HypothesisSet set) {
  const SearchSpace s = space();
  auto builder = [&] { return HypothesisBuilder(s); };
  switch (set) {
    case HypothesisSet::what_they_knew:
      return {builder()
                  .eq({{"P10", 1}}, 5)
                  .ge({{"Cys", 1}}, 1)
                  .le({{"Cys", 1}}, 4)
                  .le({{"MB", 1}}, 0.5)
                  .le({{"RB", 1}}, 0.5)
                  .le({{"AR87", 1}}, 1)
                  .le({{"NaOH", 1}}, 3)
                  .le({{"NaCl", 1}}, 3)
                  .le({{"SDS", 1}}, 1)
                  .le({{"PVP", 1}}, 2)
                  .le({{"NaDS", 1}}, 4)
                  .build("What They Knew")};
    case HypothesisSet::perfect_hindsight:
      return {builder()
                  .ge({{"P10", 1}}, 3.5)
                  .ge({{"Cys", 1}}, 1)
                  .le({{"Cys", 1}}, 3.5)
                  .ge({{"NaOH", 1}}, 0.5)
                  .le({{"NaOH", 1}}, 2)
                  .ge({{"NaDS", 1}}, 0)
                  .le({{"NaDS", 1}}, 1.5)
                  .ge({{"Cys", 1}, {"NaOH", 1}, {"NaDS", 1}}, 2)
                  .le({{"Cys", 1}, {"NaOH", 1}, {"NaDS", 1}}, 4.5)
                  .ge({{"NaCl", 1}, {"NaDS", 1}, {"NaOH", 1}}, 1)
                  .le({{"NaCl", 1}, {"NaDS", 1}, {"NaOH", 1}}, 2.75)
                  .eq({{"MB", 1}}, 0)
                  .eq({{"AR87", 1}}, 0)
                  .eq({{"RB", 1}}, 0)
                  .le({{"NaCl", 1}}, 2.5)
                  .eq({{"SDS", 1}}, 0)
                  .eq({{"PVP", 1}}, 0)
                  .build("Perfect Hindsight")};
    case HypothesisSet::bizarro_world:
      return {builder()
                  .eq({{"P10", 1}}, 1)
                  .eq({{"Cys", 1}}, 0)
                  .ge({{"MB", 1}}, 0.5)
                  .ge({{"AR87", 1}}, 0.5)
                  .ge({{"RB", 1}}, 0.5)
                  .eq({{"NaOH", 1}}, 0)
                  .ge({{"NaCl", 1}}, 0.5)
                  .ge({{"SDS", 1}}, 0.5)
                  .ge({{"PVP", 1}}, 0.5)
                  .eq({{"NaDS", 1}}, 0)
                  .build("Bizarro World")};
    case HypothesisSet::virtual_chemists:
      return {
          builder().eq({{"MB", 1}}, 0).eq({{"AR87", 1}}, 0).eq({{"RB", 1}}, 0).build("Dye Sceptic"),
          builder().ge({{"MB", 1}, {"AR87", 1}, {"RB", 1}}, 3).build("Dye Fanatic"),
          builder().ge({{"AR87", 1}}, 3).le({{"MB", 1}}, 0.5).le({{"RB", 1}}, 0.5).build("AR87 Obsessed"),
          builder().eq({{"SDS", 1}}, 0).eq({{"PVP", 1}}, 0).build("Surfactant Sceptic"),
          builder().ge({{"Cys", 1}}, 4).build("Scavenger Obsessive"),
          builder().ge({{"NaOH", 1}, {"NaDS", 1}}, 3.5).build("pH Fanatic"),
          builder().ge({{"NaDS", 1}}, 3.5).build("H-bond Lover"),
          builder().ge({{"NaOH", 1}, {"NaDS", 1}, {"NaCl", 1}}, 3.5).build("Halophile"),
          builder().eq({{"NaCl", 1}}, 0).build("Halophobe"),
      };
  }
  return {};
}

Hypothesis with_volume_cap(const Hypothesis& h, double cap) {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Ones(kDims);
  row(0) = 0.0;  // P10 is a solid
  return h.with_inequality(row, cap, h.label() + " + volume cap");
}

double standin_surface(const Point& c) {
  const double p10 = c(0), cys = c(1), mb = c(2), rb = c(3), ar87 = c(4);
  const double naoh = c(5), nacl = c(6), sds = c(7), pvp = c(8), nads = c(9);
  const double catalyst = p10 / 5.0;
  const double scavenger = 0.5 * cys * std::exp(1.0 - 0.5 * cys);
  const double ph = 1.0 + 0.5 * std::exp(-(naoh - 1.0) * (naoh - 1.0));
  const double dyes = std::exp(-0.5 * (mb + rb + ar87));
  const double surfactants = 1.0 / (1.0 + 0.2 * (sds + pvp));
  const double salts = (1.0 + 0.05 * nacl) * (1.0 + 0.05 * nads);
  return 2.0 * catalyst * scavenger * ph * dyes * surfactants * salts;
}

Point sample_grid(const Eigen::VectorXd& steps, Rng& rng) {
  const SearchSpace s = space();
  Point x(kDims);
  for (int k = 0; k < kDims; ++k) {
    const auto levels = static_cast<std::uint64_t>(std::floor((s.upper()(k) - s.lower()(k)) / steps(k) + 1e-9)) + 1;
    x(k) = s.lower()(k) + steps(k) * static_cast<double>(rng.below(levels));
  }
  return x;
}

HerDataset generate_standin(int rows, Rng& rng, double noise_sd) {
  if (rows < 10) throw InvalidArgument("stand-in dataset: rows must be >= 10");
  if (!(noise_sd >= 0.0)) throw InvalidArgument("stand-in dataset: noise_sd must be nonnegative");
  HerDataset d;
  d.steps = default_steps();
  for (int r = 0; r < rows; ++r) {
    Point x = sample_grid(d.steps, rng);
    for (int k = 1; k < kDims; ++k) {
      if (rng.uniform() < 0.5) x(k) = 0.0;
    }
    const double y = std::max(0.0, standin_surface(x) + noise_sd * rng.normal());
    d.compositions.push_back(std::move(x));
    d.her.push_back(y);
  }
  return d;
}

}  // namespace hypbo::her
