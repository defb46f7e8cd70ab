#include "hypbo/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hypbo/errors.hpp"
#include "hypbo/hypothesis_io.hpp"
#include "hypbo/objectives.hpp"
#include "hypbo/regret.hpp"
#include "hypbo/stats.hpp"
#include "hypbo/svg_plot.hpp"
#include "hypbo/trace_io.hpp"

namespace hypbo {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

constexpr int kOracleGridSamples = 100000;
constexpr std::uint64_t kOracleFitStream = 11;
constexpr std::uint64_t kOracleGridStream = 12;
constexpr std::uint64_t kStandinStream = 13;
constexpr double kAlpha = 0.05;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == '+') {
      if (auto t = trim(cur); !t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (auto t = trim(cur); !t.empty()) out.push_back(t);
  return out;
}

template <typename T>
T get(const pt::ptree& section, const std::string& section_name, const std::string& key) {
  try {
    return section.get<T>(key);
  } catch (const pt::ptree_error&) {
    throw ConfigError("config [" + section_name + "] " + key + ": invalid value '" + section.get<std::string>(key) + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config " + where + ": expected a boolean, got '" + v + "'");
}

fs::path resolve_path(const std::string& p, const fs::path& base) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

bool is_path_like(const std::string& key) {
  return key.find('/') != std::string::npos || key.find('\\') != std::string::npos ||
         (key.size() > 5 && key.ends_with(".json"));
}

std::string describe_objective(const ObjectiveSource& o) {
  if (!o.key.empty()) return o.key;
  if (o.her_csv) return "her:" + o.her_csv->string();
  return "her-standin:" + std::to_string(o.her_standin);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::vector<double> column(const std::vector<std::vector<double>>& curves, bool last) {
  std::vector<double> out;
  for (const auto& c : curves) out.push_back(last ? c.back() : c.front());
  return out;
}

void write_plots(const fs::path& dir, const nlohmann::json& summary, Band band) {
  const std::string spread_key = band == Band::standard_error ? "se" : "sd";
  const std::string band_name = band == Band::standard_error ? "standard error" : "standard deviation";
  struct Figure {
    const char* file;
    const char* title;
    const char* mean_key;
    const char* spread_prefix;
  };
  const std::vector<Figure> figures = {
      {"simple_regret.svg", "Simple regret", "mean_simple_regret", "_simple_regret"},
      {"cumulative_regret.svg", "Cumulative regret", "mean_cumulative_regret", "_cumulative_regret"},
      {"best_value.svg", "Best value found", "mean_best_value", "_best_value"},
  };
  for (const auto& f : figures) {
    std::vector<PlotSeries> series;
    for (const auto& [name, m] : summary.at("methods").items()) {
      PlotSeries s;
      s.name = name;
      s.mean = m.at(f.mean_key).get<std::vector<double>>();
      s.spread = m.at(spread_key + f.spread_prefix).get<std::vector<double>>();
      series.push_back(std::move(s));
    }
    PlotOptions opts;
    opts.title = std::string(f.title) + " (mean, shaded " + band_name + ")";
    opts.y_label = f.title;
    write_svg(dir / f.file, series, opts);
  }
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::hypbo:
      return "hypbo";
    case Method::vanilla_bo:
      return "vanilla_bo";
    case Method::random_search:
      return "random_search";
  }
  return "hypbo";
}

Method parse_method(std::string_view name) {
  if (name == "hypbo") return Method::hypbo;
  if (name == "vanilla_bo") return Method::vanilla_bo;
  if (name == "random_search") return Method::random_search;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  const int sources = (objective.key.empty() ? 0 : 1) + (objective.her_csv ? 1 : 0) + (objective.her_standin > 0 ? 1 : 0);
  if (sources != 1) throw ConfigError("config: set exactly one of objective key, her_csv, her_standin");
  if (objective.her_standin < 0 || (objective.her_standin > 0 && objective.her_standin < 10)) {
    throw ConfigError("config: her_standin must be >= 10");
  }
  if (objective.oracle_restarts < 1) throw ConfigError("config: oracle_restarts must be >= 1");
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  if (methods.empty()) throw ConfigError("config: at least one method is required");
  if (std::set<Method>(methods.begin(), methods.end()).size() != methods.size()) {
    throw ConfigError("config: duplicate method");
  }
  if (!(hypothesis_width > 0.0)) throw ConfigError("config: hypothesis width must be positive");
  try {
    engine.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig parse_config(std::istream& in, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  static const std::map<std::string, std::set<std::string>> known = {
      {"objective", {"key", "her_csv", "her_standin", "steps", "oracle_seed", "oracle_restarts"}},
      {"hypotheses", {"use", "width", "volume_cap"}},
      {"engine",
       {"n_init", "i_max", "gamma", "top_seeds", "l_max", "u_max", "seed", "xi", "multistarts", "refine_steps",
        "gp_optimize_every", "gp_restarts", "gp_min_points", "ard", "local_incumbent"}},
      {"methods", {"list", "trials"}},
      {"output", {"dir", "band"}},
  };
  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    if (it == known.end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError("config [" + section + "]: unknown key '" + key + "'");
    }
  }

  ExperimentConfig cfg;
  cfg.output_dir = resolve_path("hypbo_out", base_dir);
  const pt::ptree empty;
  const auto section = [&](const std::string& name) -> const pt::ptree& {
    const auto child = tree.get_child_optional(name);
    return child ? *child : empty;
  };

  const auto& obj = section("objective");
  if (auto v = obj.get_optional<std::string>("key")) cfg.objective.key = trim(*v);
  if (auto v = obj.get_optional<std::string>("her_csv")) cfg.objective.her_csv = resolve_path(trim(*v), base_dir);
  if (obj.count("her_standin")) cfg.objective.her_standin = get<int>(obj, "objective", "her_standin");
  if (auto v = obj.get_optional<std::string>("steps")) cfg.objective.steps = resolve_path(trim(*v), base_dir);
  if (obj.count("oracle_seed")) cfg.objective.oracle_seed = get<std::uint64_t>(obj, "objective", "oracle_seed");
  if (obj.count("oracle_restarts")) cfg.objective.oracle_restarts = get<int>(obj, "objective", "oracle_restarts");

  const auto& hyp = section("hypotheses");
  if (auto v = hyp.get_optional<std::string>("use")) {
    for (auto& item : split_list(*v)) {
      if (item == "none") continue;
      cfg.hypotheses.push_back(is_path_like(item) ? resolve_path(item, base_dir).string() : item);
    }
  }
  if (hyp.count("width")) cfg.hypothesis_width = get<double>(hyp, "hypotheses", "width");
  if (auto v = hyp.get_optional<std::string>("volume_cap")) cfg.volume_cap = parse_bool(trim(*v), "[hypotheses] volume_cap");

  const auto& eng = section("engine");
  auto& e = cfg.engine;
  if (eng.count("n_init")) e.n_init = get<int>(eng, "engine", "n_init");
  if (eng.count("i_max")) e.i_max = get<int>(eng, "engine", "i_max");
  if (eng.count("gamma")) e.gamma = get<double>(eng, "engine", "gamma");
  if (eng.count("top_seeds")) e.top_seeds = get<int>(eng, "engine", "top_seeds");
  if (eng.count("l_max")) e.l_max = get<int>(eng, "engine", "l_max");
  if (eng.count("u_max")) e.u_max = get<int>(eng, "engine", "u_max");
  if (eng.count("seed")) e.seed = get<std::uint64_t>(eng, "engine", "seed");
  if (eng.count("xi")) e.acquisition.jitter = get<double>(eng, "engine", "xi");
  if (eng.count("multistarts")) e.acquisition.multistarts = get<int>(eng, "engine", "multistarts");
  if (eng.count("refine_steps")) e.acquisition.refine_steps = get<int>(eng, "engine", "refine_steps");
  if (eng.count("gp_optimize_every")) e.gp_optimize_every = get<int>(eng, "engine", "gp_optimize_every");
  if (eng.count("gp_restarts")) e.surrogate.restarts = get<int>(eng, "engine", "gp_restarts");
  if (eng.count("gp_min_points")) e.surrogate.min_points_to_optimize = get<int>(eng, "engine", "gp_min_points");
  if (auto v = eng.get_optional<std::string>("ard")) e.surrogate.ard = parse_bool(trim(*v), "[engine] ard");
  if (auto v = eng.get_optional<std::string>("local_incumbent")) {
    const std::string s = trim(*v);
    if (s == "global") {
      e.local_incumbent = LocalIncumbent::global;
    } else if (s == "local") {
      e.local_incumbent = LocalIncumbent::local;
    } else {
      throw ConfigError("config [engine] local_incumbent: expected global or local");
    }
  }

  const auto& met = section("methods");
  if (auto v = met.get_optional<std::string>("list")) {
    cfg.methods.clear();
    for (const auto& item : split_list(*v)) cfg.methods.push_back(parse_method(item));
  }
  if (met.count("trials")) cfg.trials = get<int>(met, "methods", "trials");

  const auto& out = section("output");
  if (auto v = out.get_optional<std::string>("dir")) cfg.output_dir = resolve_path(trim(*v), base_dir);
  if (auto v = out.get_optional<std::string>("band")) {
    const std::string s = trim(*v);
    if (s == "se" || s == "standard_error") {
      cfg.band = Band::standard_error;
    } else if (s == "sd" || s == "standard_deviation") {
      cfg.band = Band::standard_deviation;
    } else {
      throw ConfigError("config [output] band: expected se or sd");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

double oracle_grid_optimum(const her::OracleModel& oracle, int samples, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::VectorXd steps = her::default_steps();
  std::vector<Point> grid;
  grid.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) grid.push_back(her::sample_grid(steps, rng));
  const std::vector<double> values = oracle.evaluate_batch(grid);
  return *std::max_element(values.begin(), values.end());
}

Problem resolve_problem(const ExperimentConfig& cfg) {
  Problem p;
  p.name = describe_objective(cfg.objective);
  std::optional<ObjectiveSpec> synthetic;
  if (!cfg.objective.key.empty()) {
    try {
      synthetic = parse_objective_key(cfg.objective.key);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    p.space = synthetic->bounds;
    p.optimum = synthetic->optimum_value;
    p.objective = [spec = *synthetic](const Point& x) { return evaluate(spec, x); };
  } else {
    her::HerDataset data;
    if (cfg.objective.her_csv) {
      try {
        data = her::load_csv(*cfg.objective.her_csv);
      } catch (const SchemaError& e) {
        throw ConfigError(e.what());
      }
    } else {
      Rng rng(derive_seed(cfg.objective.oracle_seed, kStandinStream));
      data = her::generate_standin(cfg.objective.her_standin, rng);
    }
    if (cfg.objective.steps) {
      try {
        data.steps = her::load_step_overrides(*cfg.objective.steps, data.steps);
      } catch (const SchemaError& e) {
        throw ConfigError(e.what());
      }
    }
    Rng rng(derive_seed(cfg.objective.oracle_seed, kOracleFitStream));
    auto oracle = std::make_shared<const her::OracleModel>(her::OracleModel::fit(data, rng, cfg.objective.oracle_restarts));
    p.space = oracle->space();
    p.objective = [oracle](const Point& x) { return oracle->evaluate(x); };
    p.oracle = std::move(oracle);
  }

  for (const auto& key : cfg.hypotheses) {
    if (is_path_like(key)) {
      try {
        auto loaded = load_hypotheses(key, p.space);
        for (auto& h : loaded) p.hypotheses.push_back(std::move(h));
      } catch (const SchemaError& e) {
        throw ConfigError(e.what());
      }
      continue;
    }
    if (key == "good" || key == "weak" || key == "poor") {
      if (!synthetic) throw ConfigError("hypothesis '" + key + "' needs a synthetic objective");
      p.hypotheses.push_back(make_quality_hypothesis(*synthetic, parse_quality(key), cfg.hypothesis_width));
      continue;
    }
    if (synthetic) throw ConfigError("hypothesis '" + key + "' needs the chemistry oracle");
    her::HypothesisSet set{};
    try {
      set = her::parse_hypothesis_set(key);
    } catch (const InvalidArgument&) {
      throw ConfigError("unknown hypothesis key '" + key + "'");
    }
    for (auto& h : her::chemistry_hypotheses(set)) {
      p.hypotheses.push_back(cfg.volume_cap ? her::with_volume_cap(h) : std::move(h));
    }
  }
  if (cfg.engine.top_seeds > std::max<int>(1, static_cast<int>(p.hypotheses.size()))) {
    throw ConfigError("config: top_seeds exceeds the number of hypotheses");
  }
  return p;
}

int worker_count() {
  int n = omp_get_max_threads();
  if (const char* cap = std::getenv("HYPBO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && v >= 1) n = std::min<int>(n, static_cast<int>(v));
  }
  return std::max(1, n);
}

nlohmann::json summarize(const std::vector<MethodRuns>& runs, double optimum, const std::string& optimum_source,
                         Band band) {
  nlohmann::json summary;
  summary["optimum"] = optimum;
  summary["optimum_source"] = optimum_source;
  summary["band"] = band == Band::standard_error ? "se" : "sd";
  summary["methods"] = nlohmann::json::object();
  std::map<Method, std::vector<double>> finals;
  for (const auto& run : runs) {
    std::vector<std::vector<double>> simple;
    std::vector<std::vector<double>> cumulative;
    std::vector<std::vector<double>> best;
    for (const auto& t : run.traces) {
      simple.push_back(simple_regret(t, optimum));
      cumulative.push_back(cumulative_regret(t, optimum));
      best.push_back(best_so_far(t));
    }
    const CurveStats s = aggregate(simple);
    const CurveStats c = aggregate(cumulative);
    const CurveStats b = aggregate(best);
    nlohmann::json m;
    m["trials"] = run.traces.size();
    m["mean_simple_regret"] = s.mean;
    m["se_simple_regret"] = s.standard_error;
    m["sd_simple_regret"] = s.standard_deviation;
    m["mean_cumulative_regret"] = c.mean;
    m["se_cumulative_regret"] = c.standard_error;
    m["sd_cumulative_regret"] = c.standard_deviation;
    m["mean_best_value"] = b.mean;
    m["se_best_value"] = b.standard_error;
    m["sd_best_value"] = b.standard_deviation;
    finals[run.method] = column(simple, true);
    m["final_simple_regret"] = finals[run.method];
    summary["methods"][std::string(method_name(run.method))] = m;
  }

  nlohmann::json comparisons = nlohmann::json::array();
  if (finals.contains(Method::hypbo)) {
    const int k = static_cast<int>(finals.size()) - 1;
    for (const auto& [method, values] : finals) {
      if (method == Method::hypbo) continue;
      nlohmann::json c;
      c["a"] = "hypbo";
      c["b"] = method_name(method);
      c["alpha"] = kAlpha;
      c["bonferroni_alpha"] = bonferroni(kAlpha, k);
      try {
        const WilcoxonResult w = wilcoxon_signed_rank(finals[Method::hypbo], values);
        c["w_plus"] = w.w_plus;
        c["w_minus"] = w.w_minus;
        c["statistic"] = w.statistic;
        c["n"] = w.n;
        c["exact"] = w.exact;
        c["p_value"] = w.p_value;
        c["significant_raw"] = w.p_value < kAlpha;
        c["significant_bonferroni"] = w.p_value < bonferroni(kAlpha, k);
      } catch (const std::exception& e) {
        c["p_value"] = nullptr;
        c["note"] = e.what();
      }
      comparisons.push_back(c);
    }
  }
  summary["comparisons"] = comparisons;
  return summary;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) { return run_experiment(cfg, resolve_problem(cfg)); }

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Problem& problem) {
  cfg.validate();
  const int trials = cfg.trials;
  const auto jobs = static_cast<int>(cfg.methods.size()) * trials;
  std::vector<Trace> traces(static_cast<std::size_t>(jobs));
  std::vector<std::string> failures(static_cast<std::size_t>(jobs));

#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
  for (int job = 0; job < jobs; ++job) {
    const Method method = cfg.methods[static_cast<std::size_t>(job / trials)];
    const int t = job % trials;
    EngineConfig engine = cfg.engine;
    engine.seed = cfg.engine.seed + static_cast<std::uint64_t>(t);
    try {
      switch (method) {
        case Method::hypbo:
          traces[static_cast<std::size_t>(job)] = run_hypbo(problem.objective, problem.space, problem.hypotheses, engine);
          break;
        case Method::vanilla_bo:
          traces[static_cast<std::size_t>(job)] = run_vanilla_bo(problem.objective, problem.space, engine);
          break;
        case Method::random_search:
          traces[static_cast<std::size_t>(job)] = run_random_search(problem.objective, problem.space, engine);
          break;
      }
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(job)] = std::string(method_name(method)) + " trial " + std::to_string(t) +
                                                " (seed " + std::to_string(engine.seed) + ") failed: " + e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw std::runtime_error(f);
  }

  ExperimentResult result;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    MethodRuns runs{cfg.methods[m], {}};
    for (int t = 0; t < trials; ++t) {
      runs.traces.push_back(std::move(traces[m * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)]));
    }
    result.runs.push_back(std::move(runs));
  }

  double optimum = 0.0;
  std::string optimum_source = "known";
  std::optional<double> grid_optimum;
  if (problem.optimum) {
    optimum = *problem.optimum;
  } else {
    grid_optimum = oracle_grid_optimum(*problem.oracle, kOracleGridSamples,
                                       derive_seed(cfg.objective.oracle_seed, kOracleGridStream));
    optimum = *grid_optimum;
    for (const auto& run : result.runs) {
      for (const auto& t : run.traces) {
        for (const auto& r : t.records) optimum = std::max(optimum, r.y);
      }
    }
    optimum_source = "grid_sample";
  }
  result.summary = summarize(result.runs, optimum, optimum_source, cfg.band);

  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir / "traces");
  nlohmann::json manifest;
  manifest["objective"] = problem.name;
  manifest["dim"] = problem.space.dim();
  manifest["methods"] = nlohmann::json::array();
  for (Method m : cfg.methods) manifest["methods"].push_back(method_name(m));
  manifest["trials"] = trials;
  manifest["master_seed"] = cfg.engine.seed;
  manifest["hypotheses"] = nlohmann::json::array();
  for (const auto& h : problem.hypotheses) manifest["hypotheses"].push_back(h.label());
  manifest["optimum"] = optimum;
  manifest["optimum_source"] = optimum_source;
  if (grid_optimum) manifest["grid_optimum"] = *grid_optimum;
  manifest["band"] = cfg.band == Band::standard_error ? "se" : "sd";
  manifest["engine"] = {{"n_init", cfg.engine.n_init},         {"i_max", cfg.engine.i_max},
                        {"gamma", cfg.engine.gamma},           {"top_seeds", cfg.engine.top_seeds},
                        {"l_max", cfg.engine.l_max},           {"u_max", cfg.engine.u_max},
                        {"xi", cfg.engine.acquisition.jitter}, {"gp_optimize_every", cfg.engine.gp_optimize_every}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  for (const auto& run : result.runs) {
    for (int t = 0; t < trials; ++t) {
      write_trace_csv(run.traces[static_cast<std::size_t>(t)], t,
                      dir / "traces" / (std::string(method_name(run.method)) + "_trial" + std::to_string(t) + ".csv"));
    }
  }
  write_text(dir / "summary.json", result.summary.dump(2) + "\n");
  write_plots(dir, result.summary, cfg.band);
  return result;
}

nlohmann::json report(const fs::path& output_dir) {
  std::ifstream in(output_dir / "manifest.json");
  if (!in) throw ConfigError("no manifest.json in " + output_dir.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest.json: ") + e.what());
  }
  const Band band = manifest.value("band", "se") == "sd" ? Band::standard_deviation : Band::standard_error;
  const int trials = manifest.at("trials").get<int>();
  std::vector<MethodRuns> runs;
  for (const auto& name : manifest.at("methods")) {
    MethodRuns r{parse_method(name.get<std::string>()), {}};
    for (int t = 0; t < trials; ++t) {
      const fs::path p = output_dir / "traces" / (name.get<std::string>() + "_trial" + std::to_string(t) + ".csv");
      r.traces.push_back(read_trace_csv(p).trace);
    }
    runs.push_back(std::move(r));
  }
  const nlohmann::json summary = summarize(runs, manifest.at("optimum").get<double>(),
                                           manifest.at("optimum_source").get<std::string>(), band);
  write_text(output_dir / "summary.json", summary.dump(2) + "\n");
  write_plots(output_dir, summary, band);
  return summary;
}

}  // namespace hypbo
