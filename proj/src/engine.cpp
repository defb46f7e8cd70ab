#include "hypbo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <string>

#include "hypbo/errors.hpp"

namespace hypbo {

namespace {

enum StreamTag : std::uint64_t { kInitStream = 1, kLowerStream = 2, kUpperStream = 3, kRandomStream = 4 };

constexpr int kAnchorCount = 3;

KernelParams initial_params(const SurrogateConfig& s, int dim) {
  return KernelParams::uniform(dim, s.initial_lengthscale, s.noise_variance);
}

GPFitOptions fit_options(const SurrogateConfig& s, const SearchSpace& space, bool optimize) {
  GPFitOptions o;
  o.optimize = optimize;
  o.restarts = s.restarts;
  o.ard = s.ard;
  o.optimize_noise = false;
  o.standardize_targets = s.standardize_targets;
  o.input_space = space;
  o.max_evals_per_restart = s.max_evals_per_restart;
  return o;
}

// Sample standard deviation of y as used by target standardization; 1 when
// standardization is off or undefined.
double target_scale(const Dataset& data, const SurrogateConfig& s) {
  if (!s.standardize_targets || data.size() < 2) return 1.0;
  double mean = 0.0;
  for (double y : data.ys()) mean += y;
  mean /= static_cast<double>(data.size());
  double ss = 0.0;
  for (double y : data.ys()) ss += (y - mean) * (y - mean);
  const double sd = std::sqrt(ss / static_cast<double>(data.size() - 1));
  return sd > 0.0 ? sd : 1.0;
}

GPModel fit_surrogate(const Dataset& data, const SearchSpace& space, const SurrogateConfig& s, Rng& rng,
                      std::optional<KernelParams>* warm, bool reoptimize) {
  const double scale = target_scale(data, s);
  const double noise = s.noise_variance / (scale * scale);
  KernelParams init = initial_params(s, space.dim());
  init.noise_variance = noise;
  GPModel model = [&] {
    if (static_cast<int>(data.size()) < s.min_points_to_optimize) {
      return GPModel::condition(data, init, fit_options(s, space, false));
    }
    if (warm && warm->has_value() && !reoptimize) {
      KernelParams reuse = **warm;
      reuse.noise_variance = noise;
      return GPModel::condition(data, reuse, fit_options(s, space, false));
    }
    return fit_gp(data, init, fit_options(s, space, true), rng);
  }();
  if (warm) *warm = model.params();
  return model;
}

std::string format_point(const Point& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ')';
  return os.str();
}

class Recorder {
 public:
  Recorder(const Objective& f, int dim, std::span<const Hypothesis> hypotheses) : f_(f) {
    trace_.dim = dim;
    for (const auto& h : hypotheses) trace_.hypothesis_labels.push_back(h.label());
  }

  double evaluate(const Point& x) const {
    const double y = f_(x);
    if (!std::isfinite(y)) throw ObjectiveError("objective returned non-finite value at " + format_point(x));
    return y;
  }

  void add(int iteration, Source source, int hypothesis, const Point& x, double y, std::optional<double> acq, int l,
           int u) {
    data_.append(x, y);
    trace_.records.push_back({iteration, source, hypothesis, x, y, data_.y_max(), acq, l, u});
  }

  void add_design(const std::vector<TaggedPoint>& design) {
    for (const auto& tp : design) add(0, tp.source, tp.hypothesis, tp.x, evaluate(tp.x), std::nullopt, 0, 0);
  }

  const Dataset& data() const { return data_; }
  Trace take() { return std::move(trace_); }

 private:
  const Objective& f_;
  Dataset data_;
  Trace trace_;
};

}  // namespace

void EngineConfig::validate() const {
  if (n_init < 1) throw InvalidArgument("engine: n_init must be >= 1");
  if (i_max < 1) throw InvalidArgument("engine: i_max must be >= 1");
  if (!(gamma >= 0.0)) throw InvalidArgument("engine: gamma must be nonnegative");
  if (top_seeds < 1) throw InvalidArgument("engine: top_seeds must be >= 1");
  if (l_max < 1 || u_max < 1) throw InvalidArgument("engine: l_max and u_max must be >= 1");
  if (gp_optimize_every < 1) throw InvalidArgument("engine: gp_optimize_every must be >= 1");
  if (surrogate.restarts < 1) throw InvalidArgument("engine: surrogate restarts must be >= 1");
  if (!(surrogate.noise_variance >= 0.0)) throw InvalidArgument("engine: noise_variance must be nonnegative");
  if (!(surrogate.initial_lengthscale > 0.0)) throw InvalidArgument("engine: initial_lengthscale must be positive");
  if (surrogate.min_points_to_optimize < 0) throw InvalidArgument("engine: min_points_to_optimize must be >= 0");
  acquisition.validate();
}

std::string_view source_name(Source s) {
  switch (s) {
    case Source::init_hypothesis:
      return "init_h";
    case Source::init_global:
      return "init_g";
    case Source::lower:
      return "lower";
    case Source::upper:
      return "upper";
  }
  return "upper";
}

Source parse_source(std::string_view name) {
  if (name == "init_h") return Source::init_hypothesis;
  if (name == "init_g") return Source::init_global;
  if (name == "lower") return Source::lower;
  if (name == "upper") return Source::upper;
  throw ParseError("unknown trace source '" + std::string(name) + "'");
}

std::size_t Trace::init_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const TraceRecord& r) { return r.iteration == 0; }));
}

int Trace::iterations() const {
  int m = 0;
  for (const auto& r : records) m = std::max(m, r.iteration);
  return m;
}

std::vector<TaggedPoint> initial_design(const SearchSpace& space, std::span<const Hypothesis> hypotheses, int n,
                                        Rng& rng) {
  if (n < 1) throw InvalidArgument("initial_design: n must be >= 1");
  std::vector<TaggedPoint> out;
  const int j_count = static_cast<int>(hypotheses.size());
  out.reserve(static_cast<std::size_t>(j_count + std::max(1, n - j_count)));
  for (int j = 0; j < j_count; ++j) {
    if (hypotheses[j].dim() != space.dim()) throw InvalidArgument("initial_design: hypothesis dimension mismatch");
    out.push_back({Source::init_hypothesis, j, hypotheses[j].sample_uniform(rng)});
  }
  const int m = std::max(1, n - j_count);
  for (int i = 0; i < m; ++i) out.push_back({Source::init_global, -1, space.sample_uniform(rng)});
  return out;
}

bool improved(double y_max, double y_new, double gamma) {
  if (y_max >= 0.0) return y_new > (1.0 + gamma) * y_max;
  return y_new > (1.0 - gamma) * y_max;
}

std::vector<Seed> lower_step(const Dataset& data, std::span<const Hypothesis> hypotheses, int top,
                             const AcquisitionSpec& spec, const SurrogateConfig& surrogate, LocalIncumbent incumbent,
                             std::uint64_t stream, std::vector<std::optional<KernelParams>>* warm, bool reoptimize) {
  const int j_count = static_cast<int>(hypotheses.size());
  if (j_count == 0) throw InvalidArgument("lower_step: no hypotheses");
  if (top < 1 || top > j_count) throw InvalidArgument("lower_step: top_seeds must lie in [1, J]");
  if (data.empty()) throw InvalidArgument("lower_step: empty dataset");
  if (warm) warm->resize(static_cast<std::size_t>(j_count));

  std::vector<Seed> seeds(static_cast<std::size_t>(j_count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(j_count));
#pragma omp parallel for schedule(dynamic) if (j_count > 1)
  for (int j = 0; j < j_count; ++j) {
    try {
      const Hypothesis& h = hypotheses[static_cast<std::size_t>(j)];
      Rng rng(derive_seed(stream, static_cast<std::uint64_t>(j)));
      const Dataset local = filter_dataset(h, data);
      std::optional<KernelParams>* slot = warm ? &(*warm)[static_cast<std::size_t>(j)] : nullptr;
      const GPModel model = local.empty()
                                ? GPModel::prior(h.dim(), initial_params(surrogate, h.dim()), h.space())
                                : fit_surrogate(local, h.space(), surrogate, rng, slot, reoptimize);
      const double inc =
          (incumbent == LocalIncumbent::local && !local.empty()) ? local.y_max() : data.y_max();
      const std::vector<Point> anchors = best_points(local, kAnchorCount);
      Candidate c = maximize_acquisition(model, h, inc, spec, rng, anchors);
      seeds[static_cast<std::size_t>(j)] = {j, std::move(c.x), c.acq_value};
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::stable_sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.acq_value > b.acq_value; });
  seeds.resize(static_cast<std::size_t>(top));
  return seeds;
}

Candidate upper_step(const Dataset& data, const SearchSpace& space, const AcquisitionSpec& spec,
                     const SurrogateConfig& surrogate, Rng& rng, std::optional<KernelParams>* warm, bool reoptimize) {
  if (data.empty()) throw InvalidArgument("upper_step: empty dataset");
  const GPModel model = fit_surrogate(data, space, surrogate, rng, warm, reoptimize);
  const std::vector<Point> anchors = best_points(data, kAnchorCount);
  return maximize_acquisition(model, space, data.y_max(), spec, rng, anchors);
}

Trace run_hypbo(const Objective& f, const SearchSpace& space, std::span<const Hypothesis> hypotheses,
                const EngineConfig& config) {
  config.validate();
  const int j_count = static_cast<int>(hypotheses.size());
  if (config.top_seeds > std::max(1, j_count)) throw InvalidArgument("engine: top_seeds exceeds max(1, J)");

  Recorder rec(f, space.dim(), hypotheses);
  Rng init_rng(derive_seed(config.seed, kInitStream));
  rec.add_design(initial_design(space, hypotheses, config.n_init, init_rng));

  std::vector<std::optional<KernelParams>> warm_local;
  std::optional<KernelParams> warm_global;
  int i = 0;
  int l = 0;
  int u = 0;
  while (i < config.i_max) {
    if (j_count > 0) {
      l = 0;
      while (l < config.l_max && i < config.i_max) {
        const bool reopt = i % config.gp_optimize_every == 0;
        const std::vector<Seed> seeds =
            lower_step(rec.data(), hypotheses, config.top_seeds, config.acquisition, config.surrogate,
                       config.local_incumbent, derive_seed(config.seed, kLowerStream, static_cast<std::uint64_t>(i)),
                       &warm_local, reopt);
        std::vector<double> ys;
        ys.reserve(seeds.size());
        for (const auto& s : seeds) ys.push_back(rec.evaluate(s.x));
        const double y_tmax = *std::max_element(ys.begin(), ys.end());
        l = improved(rec.data().y_max(), y_tmax, config.gamma) ? 0 : l + 1;
        ++i;
        for (std::size_t t = 0; t < seeds.size(); ++t) {
          rec.add(i, Source::lower, seeds[t].hypothesis, seeds[t].x, ys[t], seeds[t].acq_value, l, u);
        }
      }
    }
    u = 0;
    while (u < config.u_max && i < config.i_max) {
      const bool reopt = i % config.gp_optimize_every == 0;
      Rng rng(derive_seed(config.seed, kUpperStream, static_cast<std::uint64_t>(i)));
      const Candidate c =
          upper_step(rec.data(), space, config.acquisition, config.surrogate, rng, &warm_global, reopt);
      const double y = rec.evaluate(c.x);
      u = improved(rec.data().y_max(), y, config.gamma) ? 0 : u + 1;
      ++i;
      rec.add(i, Source::upper, -1, c.x, y, c.acq_value, l, u);
    }
  }
  return rec.take();
}

Trace run_vanilla_bo(const Objective& f, const SearchSpace& space, const EngineConfig& config) {
  config.validate();
  Recorder rec(f, space.dim(), {});
  Rng init_rng(derive_seed(config.seed, kInitStream));
  rec.add_design(initial_design(space, {}, config.n_init, init_rng));

  std::optional<KernelParams> warm;
  int u = 0;
  for (int i = 0; i < config.i_max; ++i) {
    if (u == config.u_max) u = 0;  // a plateaued phase restarts its counter
    Rng rng(derive_seed(config.seed, kUpperStream, static_cast<std::uint64_t>(i)));
    const Candidate c =
        upper_step(rec.data(), space, config.acquisition, config.surrogate, rng, &warm,
                   i % config.gp_optimize_every == 0);
    const double y = rec.evaluate(c.x);
    u = improved(rec.data().y_max(), y, config.gamma) ? 0 : u + 1;
    rec.add(i + 1, Source::upper, -1, c.x, y, c.acq_value, 0, u);
  }
  return rec.take();
}

Trace run_random_search(const Objective& f, const SearchSpace& space, const EngineConfig& config) {
  config.validate();
  Recorder rec(f, space.dim(), {});
  Rng init_rng(derive_seed(config.seed, kInitStream));
  rec.add_design(initial_design(space, {}, config.n_init, init_rng));

  Rng rng(derive_seed(config.seed, kRandomStream));
  for (int i = 0; i < config.i_max; ++i) {
    const Point x = space.sample_uniform(rng);
    rec.add(i + 1, Source::upper, -1, x, rec.evaluate(x), std::nullopt, 0, 0);
  }
  return rec.take();
}

}  // namespace hypbo
