#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "menuabc/menu_model.hpp"

namespace menuabc {

enum class Condition { kAll, kAbs, kPre };

const char* to_string(Condition c);

struct FixationHistogram {
  double bin_width_ms = 100.0;
  int n_bins = 20;  // the last bin absorbs overflow
  std::vector<double> mass;
};

struct ConditionStats {
  std::size_t n_sessions = 0;
  double tct_mean_ms = 0.0;
  double tct_std_ms = 0.0;  // population convention (divide by n)
  double n_fixations_mean = 0.0;
  FixationHistogram fixation_durations;
  // Mean per-session share of fixations landing on the target, indexed by
  // target slot. NaN for slots without target sessions (always for abs).
  std::vector<double> gaze_to_target;
};

struct BehaviorSummary {
  std::optional<ConditionStats> all;
  std::optional<ConditionStats> abs;
  std::optional<ConditionStats> pre;

  const std::optional<ConditionStats>& condition(Condition c) const;
  // Throws when the condition is missing from this summary.
  const ConditionStats& require(Condition c) const;
};

inline constexpr std::size_t kSubsetAll = std::numeric_limits<std::size_t>::max();

// Aggregates the first `subset` sessions. Conditions with zero sessions are
// reported as missing.
BehaviorSummary summarize(const std::vector<SessionLog>& sessions,
                          std::size_t subset = kSubsetAll, int n_items = 8);

// One row per event: session_id, condition, event_index, action, slot (1-based,
// 0 = none), duration_ms.
void write_sessions_csv(std::ostream& out, const std::vector<SessionLog>& sessions);

}  // namespace menuabc
