#include "menuabc/discrepancy.hpp"

#include <cmath>
#include <stdexcept>

namespace menuabc {

void DiscrepancyConfig::validate() const {
  if (a < 0.0 || b < 0.0) {
    throw std::invalid_argument("discrepancy weights must be >= 0");
  }
}

DiscrepancyValue tct_discrepancy(const BehaviorSummary& obs, const BehaviorSummary& sim,
                                 const DiscrepancyConfig& cfg, Condition condition) {
  const ConditionStats& o = obs.require(condition);
  const ConditionStats& s = sim.require(condition);
  const double mean_diff = o.tct_mean_ms - s.tct_mean_ms;
  const double std_diff = std::abs(o.tct_std_ms - s.tct_std_ms);
  return {cfg.a * mean_diff * mean_diff + cfg.b * std_diff};
}

DiscrepancyValue split_condition_discrepancy(const BehaviorSummary& obs,
                                             const BehaviorSummary& sim,
                                             const DiscrepancyConfig& cfg) {
  const double d_abs = tct_discrepancy(obs, sim, cfg, Condition::kAbs).value;
  const double d_pre = tct_discrepancy(obs, sim, cfg, Condition::kPre).value;
  return {0.5 * (d_abs + d_pre)};
}

DiscrepancyValue discrepancy(const BehaviorSummary& obs, const BehaviorSummary& sim,
                             const DiscrepancyConfig& cfg) {
  if (cfg.mode == DiscrepancyMode::kSplitConditions) {
    return split_condition_discrepancy(obs, sim, cfg);
  }
  return tct_discrepancy(obs, sim, cfg, Condition::kAll);
}

}  // namespace menuabc
