#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hypbo/errors.hpp"
#include "hypbo/harness.hpp"

namespace hypbo {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hypbo_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

ExperimentConfig sphere_config(const std::string& out, std::vector<Method> methods, int trials, int i_max) {
  ExperimentConfig c;
  c.objective.key = "sphere:2";
  c.methods = std::move(methods);
  c.trials = trials;
  c.engine.i_max = i_max;
  c.engine.seed = 100;
  c.output_dir = scratch(out);
  return c;
}

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "/base");
}

TEST(Config, ParsesAllSections) {
  const ExperimentConfig c = parse(
      "[objective]\nkey = levy:5\n"
      "[hypotheses]\nuse = good, poor\nwidth = 1.5\n"
      "[engine]\nn_init = 6\ni_max = 40\ngamma = 0.1\ntop_seeds = 2\nl_max = 3\nu_max = 4\nseed = 9\n"
      "xi = 0.01\nmultistarts = 32\nrefine_steps = 20\ngp_optimize_every = 2\ngp_restarts = 3\n"
      "gp_min_points = 4\nard = false\nlocal_incumbent = local\n"
      "[methods]\nlist = hypbo, random_search\ntrials = 4\n"
      "[output]\ndir = out\nband = sd\n");
  EXPECT_EQ(c.objective.key, "levy:5");
  EXPECT_EQ(c.hypotheses, (std::vector<std::string>{"good", "poor"}));
  EXPECT_EQ(c.hypothesis_width, 1.5);
  EXPECT_EQ(c.engine.n_init, 6);
  EXPECT_EQ(c.engine.i_max, 40);
  EXPECT_EQ(c.engine.gamma, 0.1);
  EXPECT_EQ(c.engine.top_seeds, 2);
  EXPECT_EQ(c.engine.l_max, 3);
  EXPECT_EQ(c.engine.u_max, 4);
  EXPECT_EQ(c.engine.seed, 9u);
  EXPECT_EQ(c.engine.acquisition.jitter, 0.01);
  EXPECT_EQ(c.engine.acquisition.multistarts, 32);
  EXPECT_EQ(c.engine.acquisition.refine_steps, 20);
  EXPECT_EQ(c.engine.gp_optimize_every, 2);
  EXPECT_EQ(c.engine.surrogate.restarts, 3);
  EXPECT_EQ(c.engine.surrogate.min_points_to_optimize, 4);
  EXPECT_FALSE(c.engine.surrogate.ard);
  EXPECT_EQ(c.engine.local_incumbent, LocalIncumbent::local);
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::hypbo, Method::random_search}));
  EXPECT_EQ(c.trials, 4);
  EXPECT_EQ(c.output_dir, fs::path("/base/out"));
  EXPECT_EQ(c.band, Band::standard_deviation);
}

TEST(Config, Defaults) {
  const ExperimentConfig c = parse("[objective]\nkey = sphere:2\n[hypotheses]\nuse = none\n");
  EXPECT_TRUE(c.hypotheses.empty());
  EXPECT_EQ(c.methods.size(), 3u);
  EXPECT_EQ(c.band, Band::standard_error);
  EXPECT_EQ(c.engine.n_init, 5);
  EXPECT_EQ(c.engine.l_max, 2);
  EXPECT_EQ(c.engine.u_max, 5);
  EXPECT_EQ(c.engine.top_seeds, 1);
  EXPECT_EQ(c.engine.gamma, 0.0);
}

TEST(Config, Errors) {
  EXPECT_THROW((void)parse("[objective]\nkey = sphere:2\n[extras]\na = 1\n"), ConfigError);
  EXPECT_THROW((void)parse("[objective]\nkey = sphere:2\ncolour = red\n"), ConfigError);
  EXPECT_THROW((void)parse("[objective]\nkey = sphere:2\n[engine]\ni_max = many\n"), ConfigError);
  EXPECT_THROW((void)parse("[objective]\nkey = sphere:2\n[engine]\ni_max = 0\n"), ConfigError);
  EXPECT_THROW((void)parse("[objective]\nkey = sphere:2\n[engine]\ngamma = -1\n"), ConfigError);
  EXPECT_THROW((void)parse("[objective]\nkey = sphere:2\n[methods]\nlist = tpe\n"), ConfigError);
  EXPECT_THROW((void)parse("[objective]\nkey = sphere:2\n[output]\nband = iqr\n"), ConfigError);
  EXPECT_THROW((void)parse("[engine]\ni_max = 3\n"), ConfigError);
  EXPECT_THROW((void)parse("[objective]\nkey = sphere:2\nher_standin = 50\n"), ConfigError);
  EXPECT_THROW((void)load_config("/nonexistent/hypbo.ini"), ConfigError);
}

TEST(Problem, ResolvesKeysAndRejectsMismatches) {
  ExperimentConfig c;
  c.objective.key = "sphere:2";
  c.hypotheses = {"good", "poor"};
  const Problem p = resolve_problem(c);
  EXPECT_EQ(p.hypotheses.size(), 2u);
  ASSERT_TRUE(p.optimum.has_value());
  EXPECT_EQ(*p.optimum, 0.0);
  EXPECT_TRUE(p.hypotheses[0].contains(Point::Zero(2)));

  c.hypotheses = {"virtual_chemists"};
  EXPECT_THROW((void)resolve_problem(c), ConfigError);
  c.hypotheses = {"excellent"};
  EXPECT_THROW((void)resolve_problem(c), ConfigError);
  c.hypotheses = {"/nonexistent/h.json"};
  EXPECT_THROW((void)resolve_problem(c), ConfigError);
}

TEST(Problem, LoadsHypothesisFile) {
  const fs::path dir = scratch("hypfile");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "h.json");
    f << R"({"label": "near origin", "ineq": [[{"x0": 1}, "<=", 1], [{"x0": 1}, ">=", -1]]})";
  }
  ExperimentConfig c;
  c.objective.key = "sphere:2";
  c.hypotheses = {(dir / "h.json").string()};
  const Problem p = resolve_problem(c);
  ASSERT_EQ(p.hypotheses.size(), 1u);
  EXPECT_EQ(p.hypotheses[0].label(), "near origin");
}

TEST(Experiment, WritesArtifacts) {
  const ExperimentConfig c = sphere_config("plumbing", {Method::random_search}, 2, 12);
  const ExperimentResult r = run_experiment(c);
  EXPECT_TRUE(fs::exists(c.output_dir / "traces" / "random_search_trial0.csv"));
  EXPECT_TRUE(fs::exists(c.output_dir / "traces" / "random_search_trial1.csv"));
  EXPECT_TRUE(fs::exists(c.output_dir / "summary.json"));
  EXPECT_TRUE(fs::exists(c.output_dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(c.output_dir / "simple_regret.svg"));
  const nlohmann::json s = read_json(c.output_dir / "summary.json");
  EXPECT_EQ(s["methods"]["random_search"]["mean_simple_regret"].size(), 12u);
  EXPECT_EQ(s, r.summary);
  const std::string svg = slurp(c.output_dir / "simple_regret.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("random_search"), std::string::npos);
}

TEST(Experiment, RerunIsByteIdentical) {
  ExperimentConfig a = sphere_config("det_a", {Method::hypbo, Method::random_search}, 2, 8);
  a.hypotheses = {"good"};
  ExperimentConfig b = a;
  b.output_dir = scratch("det_b");
  (void)run_experiment(a);
  (void)run_experiment(b);
  for (const auto& entry : fs::directory_iterator(a.output_dir / "traces")) {
    EXPECT_EQ(slurp(entry.path()), slurp(b.output_dir / "traces" / entry.path().filename()))
        << entry.path().filename();
  }
  EXPECT_EQ(slurp(a.output_dir / "summary.json"), slurp(b.output_dir / "summary.json"));
}

TEST(Experiment, TrialSeedsIgnoreOtherMethods) {
  ExperimentConfig both = sphere_config("seed_both", {Method::vanilla_bo, Method::random_search}, 2, 6);
  ExperimentConfig alone = sphere_config("seed_alone", {Method::random_search}, 2, 6);
  (void)run_experiment(both);
  (void)run_experiment(alone);
  for (int t = 0; t < 2; ++t) {
    const std::string name = "random_search_trial" + std::to_string(t) + ".csv";
    EXPECT_EQ(slurp(both.output_dir / "traces" / name), slurp(alone.output_dir / "traces" / name));
  }
}

TEST(Experiment, WorkerCountDoesNotChangeResults) {
  ExperimentConfig a = sphere_config("threads_a", {Method::vanilla_bo, Method::random_search}, 3, 6);
  ExperimentConfig b = a;
  b.output_dir = scratch("threads_b");
  ::setenv("HYPBO_THREADS", "1", 1);
  EXPECT_EQ(worker_count(), 1);
  (void)run_experiment(a);
  ::setenv("HYPBO_THREADS", "4", 1);
  (void)run_experiment(b);
  ::unsetenv("HYPBO_THREADS");
  for (const auto& entry : fs::directory_iterator(a.output_dir / "traces")) {
    EXPECT_EQ(slurp(entry.path()), slurp(b.output_dir / "traces" / entry.path().filename()));
  }
}

// Recomputes the summary curves straight from the trace CSV text.
TEST(Experiment, SummaryMatchesIndependentRecomputation) {
  ExperimentConfig c = sphere_config("recompute", {Method::hypbo, Method::random_search}, 3, 10);
  c.hypotheses = {"weak"};
  (void)run_experiment(c);
  const nlohmann::json s = read_json(c.output_dir / "summary.json");
  for (const std::string method : {"hypbo", "random_search"}) {
    std::vector<std::vector<double>> simple;
    std::vector<std::vector<double>> cumulative;
    for (int t = 0; t < 3; ++t) {
      std::istringstream csv(slurp(c.output_dir / "traces" / (method + "_trial" + std::to_string(t) + ".csv")));
      std::string line;
      std::getline(csv, line);
      std::vector<std::string> header;
      {
        std::stringstream hs(line);
        for (std::string f; std::getline(hs, f, ',');) header.push_back(f);
      }
      const auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
      };
      std::map<int, double> best_at;
      std::map<int, double> loss_at;
      double best = -INFINITY;
      while (std::getline(csv, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
        const int it = std::stoi(f[col("iteration")]);
        const double y = std::stod(f[col("y")]);
        best = std::max(best, y);
        if (it > 0) {
          best_at[it] = best;
          loss_at[it] += 0.0 - y;
        }
      }
      std::vector<double> sr, cr;
      double acc = 0.0;
      for (int i = 1; i <= 10; ++i) {
        sr.push_back(0.0 - best_at.at(i));
        acc += loss_at.at(i);
        cr.push_back(acc);
      }
      simple.push_back(sr);
      cumulative.push_back(cr);
    }
    const auto& m = s["methods"][method];
    for (std::size_t i = 0; i < 10; ++i) {
      double mean = 0.0, cmean = 0.0;
      for (int t = 0; t < 3; ++t) {
        mean += simple[t][i] / 3.0;
        cmean += cumulative[t][i] / 3.0;
      }
      double ss = 0.0;
      for (int t = 0; t < 3; ++t) ss += (simple[t][i] - mean) * (simple[t][i] - mean);
      const double se = std::sqrt(ss / 2.0) / std::sqrt(3.0);
      EXPECT_NEAR(m["mean_simple_regret"][i].get<double>(), mean, 1e-12);
      EXPECT_NEAR(m["se_simple_regret"][i].get<double>(), se, 1e-12);
      EXPECT_NEAR(m["mean_cumulative_regret"][i].get<double>(), cmean, 1e-12 * std::max(1.0, cmean));
    }
  }
}

TEST(Experiment, ReportRebuildsSummary) {
  const ExperimentConfig c = sphere_config("report", {Method::vanilla_bo, Method::random_search}, 2, 6);
  const ExperimentResult r = run_experiment(c);
  fs::remove(c.output_dir / "summary.json");
  fs::remove(c.output_dir / "simple_regret.svg");
  const nlohmann::json again = report(c.output_dir);
  EXPECT_EQ(again.dump(), r.summary.dump());
  EXPECT_TRUE(fs::exists(c.output_dir / "simple_regret.svg"));
  EXPECT_THROW((void)report(scratch("missing")), ConfigError);
}

TEST(Experiment, FailingTrialNamesSeed) {
  ExperimentConfig c = sphere_config("failing", {Method::random_search}, 2, 4);
  Problem p = resolve_problem(c);
  p.objective = [](const Point& x) { return x(0) > 0 ? std::nan("") : -x.squaredNorm(); };
  try {
    (void)run_experiment(c, p);
    FAIL() << "expected failure";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("random_search"), std::string::npos) << msg;
    EXPECT_NE(msg.find("seed 10"), std::string::npos) << msg;
  }
}

TEST(Experiment, SignedRankComparisonsInSummary) {
  const ExperimentConfig c = sphere_config("compare", {Method::hypbo, Method::vanilla_bo, Method::random_search}, 6, 6);
  const ExperimentResult r = run_experiment(c);
  const auto& comps = r.summary["comparisons"];
  ASSERT_EQ(comps.size(), 2u);
  for (const auto& comp : comps) {
    EXPECT_EQ(comp["a"], "hypbo");
    EXPECT_DOUBLE_EQ(comp["bonferroni_alpha"].get<double>(), 0.025);
  }
}

TEST(Experiment, GoodHypothesisBeatsRandomSearch) {
  ExperimentConfig c = sphere_config("good_vs_random", {Method::hypbo, Method::random_search}, 20, 50);
  c.hypotheses = {"good"};
  c.engine.seed = 0;
  const ExperimentResult r = run_experiment(c);
  const double hyp = r.summary["methods"]["hypbo"]["mean_simple_regret"].back().get<double>();
  const double rnd = r.summary["methods"]["random_search"]["mean_simple_regret"].back().get<double>();
  EXPECT_LT(hyp, rnd);
}

}  // namespace
}  // namespace hypbo
