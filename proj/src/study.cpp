#include "menuabc/study.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "menuabc/json_util.hpp"
#include "menuabc/rng.hpp"

namespace menuabc {

namespace {

using nlohmann::json;

// Seed streams at the harness level; the engine derives its own internally.
constexpr std::uint64_t kObservedStream = 11;
constexpr std::uint64_t kMapSimStream = 12;
constexpr std::uint64_t kRejectionStream = 33;
constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kSessionStream = 2;

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
}

json config_to_json(const RunConfig& cfg) {
  json axes = json::array();
  for (const auto& axis : cfg.space.axes()) {
    json prior;
    if (axis.prior.kind == PriorKind::kUniform) {
      prior = {{"kind", "uniform"}, {"min", axis.prior.min}, {"max", axis.prior.max}};
    } else {
      prior = {{"kind", "truncated-gaussian"},
               {"mean", axis.prior.mean},
               {"std", axis.prior.std},
               {"min", axis.prior.min},
               {"max", axis.prior.max}};
    }
    axes.push_back({{"name", axis.name},
                    {"lower", axis.lower},
                    {"upper", axis.upper},
                    {"prior", std::move(prior)}});
  }
  return {
      {"schema_version", 1},
      {"preset", to_string(cfg.preset)},
      {"seed", cfg.master_seed},
      {"out_dir", cfg.out_dir},
      {"variant", to_string(cfg.variant)},
      {"axes", std::move(axes)},
      {"fixed", cfg.fixed},
      {"ground_truth", cfg.ground_truth},
      {"observed_summary", cfg.observed_summary_path},
      {"budgets",
       {{"training_episodes", cfg.budgets.training_episodes},
        {"sessions", cfg.budgets.sessions},
        {"subset", cfg.budgets.subset},
        {"n_init", cfg.budgets.n_init},
        {"acquisitions", cfg.budgets.acquisitions},
        {"workers", cfg.budgets.workers}}},
      {"discrepancy",
       {{"a", cfg.discrepancy.a},
        {"b", cfg.discrepancy.b},
        {"mode", cfg.discrepancy.mode == DiscrepancyMode::kAggregate ? "aggregate"
                                                                     : "split-conditions"}}},
      {"layout",
       {{"n_items", cfg.layout.n_items},
        {"absent_prob", cfg.layout.absent_prob},
        {"target_band_lo", cfg.layout.target_band_lo},
        {"target_band_hi", cfg.layout.target_band_hi},
        {"group_band_lo", cfg.layout.group_band_lo},
        {"group_band_hi", cfg.layout.group_band_hi},
        {"other_band_lo", cfg.layout.other_band_lo},
        {"other_band_hi", cfg.layout.other_band_hi},
        {"med_threshold", cfg.layout.med_threshold},
        {"high_threshold", cfg.layout.high_threshold},
        {"item_pitch_deg", cfg.layout.item_pitch_deg},
        {"saccade_intercept_ms", cfg.layout.saccade_intercept_ms},
        {"saccade_slope_ms_per_deg", cfg.layout.saccade_slope_ms_per_deg},
        {"reward_big_ms", cfg.layout.reward_big_ms},
        {"max_steps", cfg.layout.max_steps},
        {"fully_observable", cfg.layout.fully_observable}}},
      {"qlearning",
       {{"alpha0", cfg.qlearning.alpha0},
        {"alpha_visits", cfg.qlearning.alpha_visits},
        {"gamma", cfg.qlearning.gamma},
        {"eps_start", cfg.qlearning.eps_start},
        {"eps_end", cfg.qlearning.eps_end},
        {"q_init", cfg.qlearning.q_init}}},
      {"kernel",
       {{"variance", cfg.kernel.variance},
        {"lengthscale", cfg.kernel.lengthscale},
        {"noise_variance", cfg.kernel.noise_variance}}},
      {"acquisition",
       {{"lcb_multiplier", cfg.acquisition.lcb_multiplier},
        {"repulsion_amplitude", cfg.acquisition.repulsion_amplitude},
        {"repulsion_scale", cfg.acquisition.repulsion_scale},
        {"prior_draw_prob", cfg.acquisition.prior_draw_prob},
        {"n_candidates", cfg.acquisition.n_candidates},
        {"refine_steps", cfg.acquisition.refine_steps}}},
      {"engine",
       {{"refit_every", cfg.refit_every},
        {"epsilon_rule",
         cfg.epsilon_rule == EpsilonRule::kMinGpMean ? "min-gp-mean" : "min-observed"},
        {"standardize", cfg.standardize_discrepancies}}},
      {"rejection",
       {{"n_samples", cfg.reject_n_samples}, {"accept_quantile", cfg.reject_quantile}}},
  };
}

void write_manifest(const RunConfig& cfg, const std::filesystem::path& dir) {
  json manifest = {{"tool", "menuabc"},
                   {"manifest_version", 1},
                   {"config", config_to_json(cfg)}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ParameterVector ground_truth_theta(const RunConfig& cfg) {
  ParameterVector theta;
  for (const auto& axis : cfg.space.axes()) {
    const auto it = cfg.ground_truth.find(axis.name);
    if (it == cfg.ground_truth.end()) {
      throw std::invalid_argument("ground_truth missing value for axis \"" + axis.name +
                                  "\"");
    }
    theta.push_back(it->second);
  }
  return theta;
}

std::string samples_csv(const InferenceResult& result, const RunConfig& cfg) {
  std::ostringstream out;
  out << "sample_index,origin,seed";
  for (const auto& axis : cfg.space.axes()) {
    out << ',' << axis.name;
  }
  out << ",discrepancy,status\n";
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    const auto& s = result.samples[i];
    out << i << ',' << to_string(s.origin) << ',' << s.seed;
    for (double v : s.theta) {
      out << ',' << fmt(v);
    }
    out << ',' << (s.ok ? fmt(s.discrepancy) : "nan") << ','
        << (s.ok ? "ok" : "failed") << '\n';
  }
  return out.str();
}

json posterior_grid_json(const PosteriorApprox& posterior, const RunConfig& cfg) {
  const std::size_t dims = cfg.space.size();
  json grid;
  const auto log_density_at = [&](const std::vector<double>& u) {
    return posterior.log_unnormalized_density(u);
  };
  if (dims == 1) {
    const int n = 201;
    json values = json::array();
    json log_density = json::array();
    for (int i = 0; i < n; ++i) {
      const double u = static_cast<double>(i) / (n - 1);
      values.push_back(cfg.space.from_unit_cube({u})[0]);
      log_density.push_back(log_density_at({u}));
    }
    grid = {{"kind", "mesh"},
            {"axes", {cfg.space.axis(0).name}},
            {"shape", {n}},
            {"values", {{cfg.space.axis(0).name, std::move(values)}}},
            {"log_density", std::move(log_density)}};
  } else if (dims == 2) {
    const int n = 41;
    json log_density = json::array();
    json v0 = json::array(), v1 = json::array();
    for (int i = 0; i < n; ++i) {
      v0.push_back(cfg.space.axis(0).lower +
                   (cfg.space.axis(0).upper - cfg.space.axis(0).lower) * i / (n - 1));
      v1.push_back(cfg.space.axis(1).lower +
                   (cfg.space.axis(1).upper - cfg.space.axis(1).lower) * i / (n - 1));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        log_density.push_back(log_density_at(
            {static_cast<double>(i) / (n - 1), static_cast<double>(j) / (n - 1)}));
      }
    }
    grid = {{"kind", "mesh"},
            {"axes", {cfg.space.axis(0).name, cfg.space.axis(1).name}},
            {"shape", {n, n}},
            {"values",
             {{cfg.space.axis(0).name, std::move(v0)},
              {cfg.space.axis(1).name, std::move(v1)}}},
            {"log_density", std::move(log_density)}};
  } else {
    // One profile per axis through the MAP.
    const ParameterVector map_unit = cfg.space.to_unit_cube(posterior.map());
    json profiles = json::array();
    const int n = 101;
    for (std::size_t d = 0; d < dims; ++d) {
      json values = json::array();
      json log_density = json::array();
      for (int i = 0; i < n; ++i) {
        std::vector<double> u = map_unit;
        u[d] = static_cast<double>(i) / (n - 1);
        values.push_back(cfg.space.from_unit_cube(u)[d]);
        log_density.push_back(log_density_at(u));
      }
      profiles.push_back({{"axis", cfg.space.axis(d).name},
                          {"values", std::move(values)},
                          {"log_density", std::move(log_density)}});
    }
    grid = {{"kind", "profiles"}, {"profiles", std::move(profiles)}};
  }
  return grid;
}

void report_stat_row(std::ostream& out, const char* condition, const char* metric,
                     double observed, double predicted, double error,
                     const char* error_unit) {
  out << "stat," << condition << ',' << metric << ',' << fmt(observed) << ','
      << fmt(predicted) << ',' << fmt(error) << ',' << error_unit << '\n';
}

}  // namespace

void write_report_csv(std::ostream& out, const BehaviorSummary& observed,
                      const BehaviorSummary& predicted) {
  out << "row_kind,condition,metric,observed,predicted,abs_error,error_unit\n";
  for (const Condition c : {Condition::kAll, Condition::kAbs, Condition::kPre}) {
    const auto& obs = observed.condition(c);
    const auto& pred = predicted.condition(c);
    if (!obs || !pred) continue;
    const char* name = to_string(c);
    report_stat_row(out, name, "tct_mean_ms", obs->tct_mean_ms, pred->tct_mean_ms,
                    std::abs(obs->tct_mean_ms - pred->tct_mean_ms) / 100.0, "100ms");
    report_stat_row(out, name, "tct_std_ms", obs->tct_std_ms, pred->tct_std_ms,
                    std::abs(obs->tct_std_ms - pred->tct_std_ms) / 100.0, "100ms");
    report_stat_row(out, name, "n_fixations_mean", obs->n_fixations_mean,
                    pred->n_fixations_mean,
                    std::abs(obs->n_fixations_mean - pred->n_fixations_mean), "count");

    const auto& oh = obs->fixation_durations;
    const auto& ph = pred->fixation_durations;
    const int bins = std::min(oh.n_bins, ph.n_bins);
    for (int k = 0; k < bins; ++k) {
      char metric[64];
      std::snprintf(metric, sizeof(metric), "fixdur_mass_bin_%04d_%04d",
                    static_cast<int>(k * oh.bin_width_ms),
                    static_cast<int>((k + 1) * oh.bin_width_ms));
      out << "hist," << name << ',' << metric << ',' << fmt(oh.mass[k]) << ','
          << fmt(ph.mass[k]) << ",," << '\n';
    }
  }
}

ModelParameters make_model_params(const RunConfig& cfg, const ParameterVector& theta) {
  ModelParameters params;
  params.variant = cfg.variant;
  const auto apply = [&](const std::string& name, double value) {
    if (name == "f_dur") {
      params.f_dur_ms = value;
    } else if (name == "d_sel") {
      params.d_sel_ms = value;
    } else if (name == "p_rec") {
      params.p_rec = value;
    } else if (name == "p_sem") {
      params.p_sem = value;
    }
  };
  for (const auto& [name, value] : cfg.fixed) apply(name, value);
  for (std::size_t i = 0; i < cfg.space.size(); ++i) {
    apply(cfg.space.axis(i).name, theta.at(i));
  }
  return params;
}

Simulator make_simulator(const RunConfig& cfg) {
  return [cfg](const ParameterVector& theta, std::uint64_t seed) {
    const MenuEnv env(cfg.layout, make_model_params(cfg, theta));
    Rng train_rng = make_rng(seed, kTrainStream);
    const PolicyTable policy =
        train_policy(env, cfg.budgets.training_episodes, cfg.qlearning, train_rng);
    Rng session_rng = make_rng(seed, kSessionStream);
    const auto sessions = simulate_sessions(policy, env, cfg.budgets.sessions, session_rng);
    return summarize(sessions, cfg.budgets.subset, cfg.layout.n_items);
  };
}

BehaviorSummary make_observed(const RunConfig& cfg) {
  if (!cfg.observed_summary_path.empty()) {
    std::ifstream in(cfg.observed_summary_path);
    if (!in) {
      throw std::runtime_error("cannot open observed summary \"" +
                               cfg.observed_summary_path + "\"");
    }
    json j;
    in >> j;
    return summary_from_json(j);
  }
  const Simulator simulator = make_simulator(cfg);
  return simulator(ground_truth_theta(cfg), derive_seed(cfg.master_seed, kObservedStream));
}

int run_simulate(const RunConfig& cfg) {
  const auto dir = ensure_out_dir(cfg);
  const ParameterVector theta = ground_truth_theta(cfg);
  const MenuEnv env(cfg.layout, make_model_params(cfg, theta));
  const std::uint64_t seed = derive_seed(cfg.master_seed, kObservedStream);
  Rng train_rng = make_rng(seed, kTrainStream);
  const PolicyTable policy =
      train_policy(env, cfg.budgets.training_episodes, cfg.qlearning, train_rng);
  Rng session_rng = make_rng(seed, kSessionStream);
  const auto sessions = simulate_sessions(policy, env, cfg.budgets.sessions, session_rng);
  const BehaviorSummary summary = summarize(sessions, cfg.budgets.subset, cfg.layout.n_items);

  std::ostringstream csv;
  write_sessions_csv(csv, sessions);
  write_file(dir / "sessions.csv", csv.str());
  write_file(dir / "summary_obs.json",
             summary_to_json(summary, cfg.layout.n_items).dump(2) + "\n");
  write_manifest(cfg, dir);
  std::cout << "simulate: wrote " << sessions.size() << " sessions to " << dir.string()
            << "\n";
  return 0;
}

int run_infer(const RunConfig& cfg) {
  const auto dir = ensure_out_dir(cfg);
  const BehaviorSummary observed = make_observed(cfg);

  InferenceProblem problem;
  problem.space = cfg.space;
  problem.simulator = make_simulator(cfg);
  problem.observed = observed;
  problem.discrepancy = cfg.discrepancy;

  EngineConfig engine;
  engine.total_budget = cfg.budgets.n_init + cfg.budgets.acquisitions;
  engine.workers = cfg.budgets.workers;
  engine.refit_every = cfg.refit_every;
  engine.acquisition = cfg.acquisition;
  engine.acquisition.n_init = cfg.budgets.n_init;
  engine.kernel = cfg.kernel;
  engine.epsilon_rule = cfg.epsilon_rule;
  engine.standardize_discrepancies = cfg.standardize_discrepancies;
  engine.master_seed = cfg.master_seed;

  const InferenceResult result = run_inference(problem, engine);

  write_file(dir / "samples.csv", samples_csv(result, cfg));
  write_file(dir / "summary_obs.json",
             summary_to_json(observed, cfg.layout.n_items).dump(2) + "\n");

  json posterior_json = {
      {"epsilon", result.posterior.epsilon()},
      {"map", json::object()},
      {"n_success", result.diagnostics.n_success},
      {"n_failed", result.diagnostics.n_failed},
      {"best_discrepancy", result.diagnostics.best_discrepancy},
      {"grid", posterior_grid_json(result.posterior, cfg)},
      {"surrogate", surrogate_to_json(result.model)},
  };
  for (std::size_t i = 0; i < cfg.space.size(); ++i) {
    posterior_json["map"][cfg.space.axis(i).name] = result.posterior.map()[i];
  }
  write_file(dir / "posterior.json", posterior_json.dump(2) + "\n");

  // Behavior predicted at the MAP, for the comparison report.
  const BehaviorSummary predicted = problem.simulator(
      result.posterior.map(), derive_seed(cfg.master_seed, kMapSimStream));
  write_file(dir / "summary_map.json",
             summary_to_json(predicted, cfg.layout.n_items).dump(2) + "\n");

  std::ostringstream report;
  write_report_csv(report, observed, predicted);
  write_file(dir / "report.csv", report.str());
  write_manifest(cfg, dir);

  std::cout << "infer: " << result.diagnostics.n_success << " ok / "
            << result.diagnostics.n_failed << " failed samples; MAP";
  for (std::size_t i = 0; i < cfg.space.size(); ++i) {
    std::cout << ' ' << cfg.space.axis(i).name << '=' << result.posterior.map()[i];
  }
  std::cout << "; artifacts in " << dir.string() << "\n";
  return 0;
}

int run_reject(const RunConfig& cfg) {
  const auto dir = ensure_out_dir(cfg);
  const BehaviorSummary observed = make_observed(cfg);

  InferenceProblem problem;
  problem.space = cfg.space;
  problem.simulator = make_simulator(cfg);
  problem.observed = observed;
  problem.discrepancy = cfg.discrepancy;

  Rng rng = make_rng(cfg.master_seed, kRejectionStream);
  const auto samples =
      rejection_abc_detailed(problem, cfg.reject_n_samples, cfg.reject_quantile, rng);

  std::ostringstream out;
  out << "sample_index,seed";
  for (const auto& axis : cfg.space.axes()) out << ',' << axis.name;
  out << ",discrepancy,accepted\n";
  ParameterVector accepted_mean(cfg.space.size(), 0.0);
  std::size_t n_accepted = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    out << i << ',' << s.seed;
    for (double v : s.theta) out << ',' << fmt(v);
    out << ',' << fmt(s.discrepancy) << ',' << (s.accepted ? 1 : 0) << '\n';
    if (s.accepted) {
      n_accepted += 1;
      for (std::size_t d = 0; d < s.theta.size(); ++d) accepted_mean[d] += s.theta[d];
    }
  }
  for (auto& m : accepted_mean) m /= static_cast<double>(n_accepted);
  write_file(dir / "samples.csv", out.str());

  json summary = {{"n_samples", samples.size()},
                  {"n_accepted", n_accepted},
                  {"accepted_mean", json::object()}};
  for (std::size_t d = 0; d < cfg.space.size(); ++d) {
    summary["accepted_mean"][cfg.space.axis(d).name] = accepted_mean[d];
  }
  write_file(dir / "reject_summary.json", summary.dump(2) + "\n");
  write_file(dir / "summary_obs.json",
             summary_to_json(observed, cfg.layout.n_items).dump(2) + "\n");
  write_manifest(cfg, dir);
  std::cout << "reject: accepted " << n_accepted << " of " << samples.size()
            << " draws; artifacts in " << dir.string() << "\n";
  return 0;
}

int run_report(const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  const auto load = [&](const char* filename) {
    std::ifstream in(dir / filename);
    if (!in) {
      throw std::runtime_error(std::string("cannot open ") + (dir / filename).string());
    }
    json j;
    in >> j;
    return summary_from_json(j);
  };
  const BehaviorSummary observed = load("summary_obs.json");
  const BehaviorSummary predicted = load("summary_map.json");
  std::ostringstream report;
  write_report_csv(report, observed, predicted);
  write_file(dir / "report.csv", report.str());
  std::cout << "report: wrote " << (dir / "report.csv").string() << "\n";
  return 0;
}

}  // namespace menuabc
