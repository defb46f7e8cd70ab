#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hypbo/errors.hpp"
#include "hypbo/harness.hpp"
#include "hypbo/her_oracle.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

void print_summary(const nlohmann::json& summary) {
  std::printf("optimum %.6g (%s)\n", summary.at("optimum").get<double>(),
              summary.at("optimum_source").get<std::string>().c_str());
  for (const auto& [name, m] : summary.at("methods").items()) {
    const auto regret = m.at("mean_simple_regret").get<std::vector<double>>();
    const auto cumulative = m.at("mean_cumulative_regret").get<std::vector<double>>();
    std::printf("%-14s final simple regret %.6g  cumulative %.6g\n", name.c_str(), regret.empty() ? 0.0 : regret.back(),
                cumulative.empty() ? 0.0 : cumulative.back());
  }
  for (const auto& c : summary.at("comparisons")) {
    if (c.at("p_value").is_null()) {
      std::printf("%s vs %s: not testable (%s)\n", c.at("a").get<std::string>().c_str(),
                  c.at("b").get<std::string>().c_str(), c.value("note", "").c_str());
      continue;
    }
    std::printf("%s vs %s: p = %.4g (Bonferroni alpha %.4g)%s\n", c.at("a").get<std::string>().c_str(),
                c.at("b").get<std::string>().c_str(), c.at("p_value").get<double>(),
                c.at("bonferroni_alpha").get<double>(), c.at("significant_bonferroni").get<bool>() ? " *" : "");
  }
}

int run_and_print(const hypbo::ExperimentConfig& cfg) {
  const auto result = hypbo::run_experiment(cfg);
  print_summary(result.summary);
  std::printf("artifacts in %s\n", cfg.output_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilevel Bayesian optimization with expert hypotheses"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  std::string config_path;
  run->add_option("config", config_path, "INI config file")->required();

  auto* bench = app.add_subcommand("bench", "Benchmark HypBO against the baselines on a synthetic function");
  std::string objective = "sphere:2";
  std::string hypothesis = "good";
  int trials = 5;
  int iters = 50;
  std::uint64_t seed = 0;
  std::string out_dir = "hypbo_bench";
  std::string methods = "hypbo,vanilla_bo,random_search";
  bench->add_option("--objective", objective, "Registry key, e.g. levy:5");
  bench->add_option("--hypothesis", hypothesis, "good, weak, poor, a '+' list, a JSON path, or none");
  bench->add_option("--trials", trials)->check(CLI::PositiveNumber);
  bench->add_option("--iters", iters)->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed);
  bench->add_option("--methods", methods);
  bench->add_option("--out", out_dir);

  auto* her = app.add_subcommand("her", "Fit the HER oracle and run the chemistry experiment");
  std::string data_path;
  int standin = 0;
  std::string set = "virtual_chemists";
  int her_trials = 5;
  int her_iters = 60;
  std::string her_out = "hypbo_her";
  her->add_option("--data", data_path, "HER CSV (written first when --standin is given)")->required();
  her->add_option("--standin", standin, "Generate a stand-in dataset with this many rows");
  her->add_option("--set", set, "what_they_knew, perfect_hindsight, bizarro_world, virtual_chemists or a JSON path");
  her->add_option("--trials", her_trials)->check(CLI::PositiveNumber);
  her->add_option("--iters", her_iters)->check(CLI::PositiveNumber);
  her->add_option("--seed", seed);
  her->add_option("--out", her_out);

  auto* rep = app.add_subcommand("report", "Regenerate summary and plots from an output directory");
  std::string report_dir;
  rep->add_option("dir", report_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return run_and_print(hypbo::load_config(config_path));

    if (*bench) {
      hypbo::ExperimentConfig cfg;
      cfg.objective.key = objective;
      std::string cur;
      for (char c : hypothesis + "+") {
        if (c == '+') {
          if (!cur.empty() && cur != "none") cfg.hypotheses.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      cfg.methods.clear();
      cur.clear();
      for (char c : methods + ",") {
        if (c == ',') {
          if (!cur.empty()) cfg.methods.push_back(hypbo::parse_method(cur));
          cur.clear();
        } else {
          cur += c;
        }
      }
      cfg.trials = trials;
      cfg.engine.i_max = iters;
      cfg.engine.seed = seed;
      cfg.output_dir = out_dir;
      cfg.validate();
      return run_and_print(cfg);
    }

    if (*her) {
      if (standin > 0) {
        hypbo::Rng rng(hypbo::derive_seed(seed, 13));
        const auto data = hypbo::her::generate_standin(standin, rng);
        std::ofstream out(data_path, std::ios::binary);
        if (!out) throw hypbo::ConfigError("cannot write " + data_path);
        hypbo::her::write_csv(data, out);
        std::printf("wrote %d stand-in rows to %s\n", standin, data_path.c_str());
      }
      hypbo::ExperimentConfig cfg;
      cfg.objective.her_csv = data_path;
      cfg.objective.oracle_seed = seed;
      cfg.hypotheses = {set};
      cfg.trials = her_trials;
      cfg.engine.i_max = her_iters;
      cfg.engine.seed = seed;
      cfg.output_dir = her_out;
      cfg.validate();
      return run_and_print(cfg);
    }

    if (*rep) {
      print_summary(hypbo::report(report_dir));
      return 0;
    }
  } catch (const hypbo::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const hypbo::SchemaError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
  return 0;
}
