#include "menuabc/json_util.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace menuabc {

namespace {

nlohmann::json stats_to_json(const ConditionStats& stats) {
  nlohmann::json j;
  j["n_sessions"] = stats.n_sessions;
  j["tct_mean_ms"] = stats.tct_mean_ms;
  j["tct_std_ms"] = stats.tct_std_ms;
  j["n_fixations_mean"] = stats.n_fixations_mean;
  j["fixation_duration_histogram"] = {
      {"bin_width_ms", stats.fixation_durations.bin_width_ms},
      {"n_bins", stats.fixation_durations.n_bins},
      {"mass", stats.fixation_durations.mass},
  };
  nlohmann::json gaze = nlohmann::json::array();
  for (double g : stats.gaze_to_target) {
    if (std::isnan(g)) {
      gaze.push_back(nullptr);
    } else {
      gaze.push_back(g);
    }
  }
  j["gaze_to_target_proportion"] = std::move(gaze);
  return j;
}

ConditionStats stats_from_json(const nlohmann::json& j) {
  ConditionStats stats;
  stats.n_sessions = j.at("n_sessions").get<std::size_t>();
  stats.tct_mean_ms = j.at("tct_mean_ms").get<double>();
  stats.tct_std_ms = j.at("tct_std_ms").get<double>();
  stats.n_fixations_mean = j.at("n_fixations_mean").get<double>();
  const auto& hist = j.at("fixation_duration_histogram");
  stats.fixation_durations.bin_width_ms = hist.at("bin_width_ms").get<double>();
  stats.fixation_durations.n_bins = hist.at("n_bins").get<int>();
  stats.fixation_durations.mass = hist.at("mass").get<std::vector<double>>();
  for (const auto& g : j.at("gaze_to_target_proportion")) {
    stats.gaze_to_target.push_back(
        g.is_null() ? std::numeric_limits<double>::quiet_NaN() : g.get<double>());
  }
  return stats;
}

}  // namespace

nlohmann::json summary_to_json(const BehaviorSummary& summary, int n_items) {
  nlohmann::json conditions = nlohmann::json::object();
  if (summary.all) conditions["all"] = stats_to_json(*summary.all);
  if (summary.abs) conditions["abs"] = stats_to_json(*summary.abs);
  if (summary.pre) conditions["pre"] = stats_to_json(*summary.pre);
  return {{"schema_version", 1}, {"n_items", n_items}, {"conditions", std::move(conditions)}};
}

BehaviorSummary summary_from_json(const nlohmann::json& j) {
  BehaviorSummary summary;
  const auto& conditions = j.at("conditions");
  if (conditions.contains("all")) summary.all = stats_from_json(conditions.at("all"));
  if (conditions.contains("abs")) summary.abs = stats_from_json(conditions.at("abs"));
  if (conditions.contains("pre")) summary.pre = stats_from_json(conditions.at("pre"));
  return summary;
}

nlohmann::json surrogate_to_json(const SurrogateModel& model) {
  return {
      {"kernel",
       {{"variance", model.config().variance},
        {"lengthscale", model.config().lengthscale},
        {"noise_variance", model.config().noise_variance}}},
      {"mean_policy", model.mean_policy() == MeanPolicy::kSampleMean ? "sample-mean" : "zero"},
      {"inputs", model.inputs()},
      {"targets", model.targets()},
  };
}

SurrogateModel surrogate_from_json(const nlohmann::json& j) {
  KernelConfig cfg;
  const auto& kernel = j.at("kernel");
  cfg.variance = kernel.at("variance").get<double>();
  cfg.lengthscale = kernel.at("lengthscale").get<double>();
  cfg.noise_variance = kernel.at("noise_variance").get<double>();
  const std::string mean = j.at("mean_policy").get<std::string>();
  if (mean != "zero" && mean != "sample-mean") {
    throw std::invalid_argument("surrogate: unknown mean policy '" + mean + "'");
  }
  return SurrogateModel::fit(j.at("inputs").get<std::vector<std::vector<double>>>(),
                             j.at("targets").get<std::vector<double>>(), cfg,
                             mean == "sample-mean" ? MeanPolicy::kSampleMean
                                                   : MeanPolicy::kZero);
}

}  // namespace menuabc
