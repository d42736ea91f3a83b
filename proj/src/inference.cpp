#include "menuabc/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "menuabc/sobol.hpp"
#include "menuabc/stats.hpp"

namespace menuabc {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Seed streams carved out of the master seed.
constexpr std::uint64_t kAcquisitionStream = 2;
constexpr std::uint64_t kSampleStreamBase = 1000;
}  // namespace

void EngineConfig::validate() const {
  if (total_budget == 0) throw std::invalid_argument("engine: budget must be > 0");
  if (workers == 0) throw std::invalid_argument("engine: workers must be > 0");
  if (refit_every == 0) throw std::invalid_argument("engine: refit_every must be > 0");
  acquisition.validate();
  kernel.validate();
}

PosteriorApprox::PosteriorApprox(SurrogateModel model, ParameterSpace space, double epsilon)
    : model_(std::move(model)), space_(std::move(space)), epsilon_(epsilon) {}

double PosteriorApprox::log_unnormalized_density(std::span<const double> unit_point) const {
  ParameterVector u(unit_point.begin(), unit_point.end());
  for (double c : u) {
    if (c < 0.0 || c > 1.0) return -kInf;
  }
  const ParameterVector theta = space_.from_unit_cube(u);
  const double log_prior = space_.log_prior_density(theta);
  if (log_prior == -kInf) return -kInf;
  const auto [mu, var] = model_.predict(unit_point);
  const double denom = std::sqrt(var + model_.config().noise_variance);
  return log_prior + log_normal_cdf((epsilon_ - mu) / denom);
}

PosteriorApprox extract_posterior(const SurrogateModel& model, const ParameterSpace& space,
                                  EpsilonRule rule) {
  if (model.n_points() == 0) {
    throw std::invalid_argument("extract_posterior: model has no training points");
  }
  double epsilon = kInf;
  if (rule == EpsilonRule::kMinGpMean) {
    for (const auto& input : model.inputs()) {
      epsilon = std::min(epsilon, model.predict(input).first);
    }
  } else {
    for (double t : model.targets()) {
      epsilon = std::min(epsilon, t);
    }
  }
  PosteriorApprox posterior(model, space, epsilon);
  posterior.set_map(map_estimate(posterior, space));
  return posterior;
}

namespace {

// Coordinate-descent polish of the log density around a starting point.
std::vector<double> refine_map(const PosteriorApprox& posterior, std::vector<double> best,
                               double& best_value) {
  double step = 0.05;
  for (int sweep = 0; sweep < 80 && step > 1e-7; ++sweep) {
    bool improved = false;
    for (std::size_t d = 0; d < best.size(); ++d) {
      for (const double direction : {-1.0, 1.0}) {
        std::vector<double> trial = best;
        trial[d] = std::clamp(trial[d] + direction * step, 0.0, 1.0);
        const double value = posterior.log_unnormalized_density(trial);
        if (value > best_value) {
          best_value = value;
          best = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

ParameterVector map_estimate(const PosteriorApprox& posterior, const ParameterSpace& space) {
  const std::size_t dims = space.size();
  std::vector<double> best(dims, 0.5);
  double best_value = -kInf;

  if (dims == 1) {
    constexpr int kGrid = 2001;
    for (int i = 0; i < kGrid; ++i) {
      const std::vector<double> u{static_cast<double>(i) / (kGrid - 1)};
      const double value = posterior.log_unnormalized_density(u);
      if (value > best_value) {
        best_value = value;
        best = u;
      }
    }
  } else if (dims == 2) {
    constexpr int kGrid = 201;
    for (int i = 0; i < kGrid; ++i) {
      for (int j = 0; j < kGrid; ++j) {
        const std::vector<double> u{static_cast<double>(i) / (kGrid - 1),
                                    static_cast<double>(j) / (kGrid - 1)};
        const double value = posterior.log_unnormalized_density(u);
        if (value > best_value) {
          best_value = value;
          best = u;
        }
      }
    }
  } else {
    // Multi-start over a low-discrepancy candidate set.
    const auto candidates = sobol_init(4096, dims);
    for (const auto& u : candidates) {
      const double value = posterior.log_unnormalized_density(u);
      if (value > best_value) {
        best_value = value;
        best = u;
      }
    }
  }
  best = refine_map(posterior, std::move(best), best_value);
  if (best_value == -kInf) {
    // Degenerate density (e.g. everything at -inf); report the cube center.
    best.assign(dims, 0.5);
  }
  return space.from_unit_cube(best);
}

namespace {

struct EngineState {
  std::mutex mutex;
  std::vector<EvaluatedSample> samples;
  PendingSet pending;
  SurrogateModel model;
  Rng acquisition_rng;
  std::size_t issued = 0;
  std::size_t completions_since_fit = 0;
  std::vector<std::vector<double>> sobol_points;
  bool model_dirty = false;
};

void refit_model(EngineState& state, const EngineConfig& cfg) {
  std::vector<std::vector<double>> points;
  std::vector<double> targets;
  for (const auto& s : state.samples) {
    if (!s.ok) continue;
    points.push_back(s.unit_point);
    targets.push_back(s.discrepancy);
  }
  if (points.empty()) return;
  state.model = SurrogateModel::fit(
      std::move(points), std::move(targets), cfg.kernel,
      cfg.standardize_discrepancies ? MeanPolicy::kSampleMean : MeanPolicy::kZero);
  state.model_dirty = false;
  state.completions_since_fit = 0;
}

void worker_loop(const InferenceProblem& problem, const EngineConfig& cfg,
                 EngineState& state) {
  std::unique_lock lock(state.mutex);
  while (state.issued < cfg.total_budget) {
    // Select the next location while holding the lock, so concurrent
    // selectors see each other's pending points.
    EvaluatedSample sample;
    const std::size_t index = state.issued;
    state.issued += 1;
    if (index < state.sobol_points.size()) {
      sample.unit_point = state.sobol_points[index];
      sample.origin = AcquisitionOrigin::kSobol;
    } else {
      AcquisitionChoice choice = next_location(state.model, state.pending, problem.space,
                                               cfg.acquisition, state.acquisition_rng);
      sample.unit_point = std::move(choice.unit_point);
      sample.origin = choice.origin;
    }
    sample.seed = derive_seed(cfg.master_seed, kSampleStreamBase + index);
    sample.theta = problem.space.from_unit_cube(sample.unit_point);
    state.pending.add(sample.unit_point);
    lock.unlock();

    const auto start = std::chrono::steady_clock::now();
    try {
      const BehaviorSummary sim = problem.simulator(sample.theta, sample.seed);
      sample.discrepancy = discrepancy(problem.observed, sim, problem.discrepancy).value;
      sample.ok = true;
    } catch (const std::exception& e) {
      sample.discrepancy = kNan;
      sample.ok = false;
      sample.error = e.what();
    }
    sample.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    lock.lock();
    state.pending.remove(sample.unit_point);
    if (sample.ok) {
      state.model_dirty = true;
    }
    state.completions_since_fit += 1;
    state.samples.push_back(std::move(sample));
    if (state.model_dirty && state.completions_since_fit >= cfg.refit_every) {
      refit_model(state, cfg);
    }
  }
}

}  // namespace

InferenceResult run_inference(const InferenceProblem& problem, const EngineConfig& cfg) {
  cfg.validate();
  if (problem.space.empty()) {
    throw std::invalid_argument("run_inference: empty parameter space");
  }

  EngineState state;
  state.acquisition_rng = make_rng(cfg.master_seed, kAcquisitionStream);
  const std::size_t n_init = std::min(cfg.acquisition.n_init, cfg.total_budget);
  state.sobol_points = sobol_init(n_init, problem.space.size());

  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.workers == 1) {
    worker_loop(problem, cfg, state);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(cfg.workers);
    for (std::size_t w = 0; w < cfg.workers; ++w) {
      pool.emplace_back([&] { worker_loop(problem, cfg, state); });
    }
    for (auto& t : pool) t.join();
  }

  if (state.model_dirty) {
    refit_model(state, cfg);
  }
  if (state.model.n_points() == 0) {
    throw std::runtime_error("run_inference: every simulator evaluation failed");
  }

  InferenceResult result;
  result.samples = std::move(state.samples);
  result.model = std::move(state.model);
  result.posterior = extract_posterior(result.model, problem.space, cfg.epsilon_rule);

  auto& diag = result.diagnostics;
  diag.epsilon = result.posterior.epsilon();
  diag.best_discrepancy = kInf;
  for (const auto& s : result.samples) {
    if (!s.ok) {
      diag.n_failed += 1;
      continue;
    }
    diag.n_success += 1;
    if (s.discrepancy < diag.best_discrepancy) {
      diag.best_discrepancy = s.discrepancy;
      diag.best_theta = s.theta;
    }
  }
  diag.total_wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::vector<RejectionSample> rejection_abc_detailed(const InferenceProblem& problem,
                                                    std::size_t n_samples,
                                                    double accept_quantile, Rng& rng) {
  if (n_samples == 0) throw std::invalid_argument("rejection_abc: n_samples must be > 0");
  if (!(accept_quantile > 0.0) || accept_quantile > 1.0) {
    throw std::invalid_argument("rejection_abc: quantile must be in (0,1]");
  }
  std::vector<RejectionSample> samples;
  samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    RejectionSample s;
    s.theta = problem.space.sample_prior(rng);
    s.seed = rng();
    const BehaviorSummary sim = problem.simulator(s.theta, s.seed);
    s.discrepancy = discrepancy(problem.observed, sim, problem.discrepancy).value;
    samples.push_back(std::move(s));
  }

  const std::size_t n_accept = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(accept_quantile * static_cast<double>(n_samples))));
  std::vector<std::size_t> order(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return samples[a].discrepancy < samples[b].discrepancy;
  });
  for (std::size_t rank = 0; rank < n_accept && rank < n_samples; ++rank) {
    samples[order[rank]].accepted = true;
  }
  return samples;
}

std::vector<ParameterVector> rejection_abc(const InferenceProblem& problem,
                                           std::size_t n_samples, double accept_quantile,
                                           Rng& rng) {
  const auto detailed = rejection_abc_detailed(problem, n_samples, accept_quantile, rng);
  std::vector<ParameterVector> accepted;
  for (const auto& s : detailed) {
    if (s.accepted) accepted.push_back(s.theta);
  }
  return accepted;
}

ParameterVector posterior_mean(const PosteriorApprox& posterior, const ParameterSpace& space,
                               std::size_t grid_per_dim) {
  const std::size_t dims = space.size();
  if (dims == 0 || dims > 3) {
    throw std::invalid_argument("posterior_mean: supports 1 to 3 axes");
  }
  if (grid_per_dim < 2) throw std::invalid_argument("posterior_mean: grid too small");

  // Stabilize the exponentials around the densest point seen.
  double max_log = -kInf;
  std::vector<std::size_t> shape(dims, grid_per_dim);
  std::vector<double> u(dims);
  const auto for_each_node = [&](auto&& body) {
    std::vector<std::size_t> idx(dims, 0);
    while (true) {
      for (std::size_t d = 0; d < dims; ++d) {
        u[d] = static_cast<double>(idx[d]) / static_cast<double>(grid_per_dim - 1);
      }
      body(u);
      std::size_t d = 0;
      while (d < dims) {
        idx[d] += 1;
        if (idx[d] < shape[d]) break;
        idx[d] = 0;
        d += 1;
      }
      if (d == dims) break;
    }
  };

  for_each_node([&](const std::vector<double>& node) {
    max_log = std::max(max_log, posterior.log_unnormalized_density(node));
  });
  if (max_log == -kInf) {
    throw std::runtime_error("posterior_mean: density is zero everywhere on the grid");
  }

  double mass = 0.0;
  std::vector<double> first_moment(dims, 0.0);
  for_each_node([&](const std::vector<double>& node) {
    const double w = std::exp(posterior.log_unnormalized_density(node) - max_log);
    mass += w;
    for (std::size_t d = 0; d < dims; ++d) {
      first_moment[d] += w * node[d];
    }
  });

  ParameterVector mean_unit(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    mean_unit[d] = first_moment[d] / mass;
  }
  return space.from_unit_cube(mean_unit);
}

}  // namespace menuabc
