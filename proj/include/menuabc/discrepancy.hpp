#pragma once

#include "menuabc/summary.hpp"

namespace menuabc {

enum class DiscrepancyMode { kAggregate, kSplitConditions };

struct DiscrepancyConfig {
  double a = 1e-6;  // weight of the squared mean difference
  double b = 1e-6;  // weight of the absolute std difference
  DiscrepancyMode mode = DiscrepancyMode::kAggregate;

  void validate() const;
};

struct DiscrepancyValue {
  double value = 0.0;
};

// d = a * (mean_obs - mean_sim)^2 + b * |std_obs - std_sim| on the TCT stats
// of one condition. Throws when either summary misses the condition.
DiscrepancyValue tct_discrepancy(const BehaviorSummary& obs, const BehaviorSummary& sim,
                                 const DiscrepancyConfig& cfg, Condition condition);

// Arithmetic mean of the abs- and pre-condition discrepancies.
DiscrepancyValue split_condition_discrepancy(const BehaviorSummary& obs,
                                             const BehaviorSummary& sim,
                                             const DiscrepancyConfig& cfg);

// Mode dispatch: aggregate compares the pooled "all" condition.
DiscrepancyValue discrepancy(const BehaviorSummary& obs, const BehaviorSummary& sim,
                             const DiscrepancyConfig& cfg);

}  // namespace menuabc
