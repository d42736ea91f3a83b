#include "menuabc/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace menuabc {

const char* to_string(Condition c) {
  switch (c) {
    case Condition::kAll: return "all";
    case Condition::kAbs: return "abs";
    case Condition::kPre: return "pre";
  }
  return "all";
}

const std::optional<ConditionStats>& BehaviorSummary::condition(Condition c) const {
  switch (c) {
    case Condition::kAll: return all;
    case Condition::kAbs: return abs;
    case Condition::kPre: return pre;
  }
  return all;
}

const ConditionStats& BehaviorSummary::require(Condition c) const {
  const auto& stats = condition(c);
  if (!stats.has_value()) {
    throw std::runtime_error(std::string("summary: missing condition '") +
                             to_string(c) + "'");
  }
  return *stats;
}

namespace {

ConditionStats compute_stats(const std::vector<const SessionLog*>& sessions, int n_items) {
  ConditionStats stats;
  stats.n_sessions = sessions.size();

  double tct_sum = 0.0;
  double fix_count_sum = 0.0;
  for (const auto* s : sessions) {
    tct_sum += s->tct_ms;
    for (const auto& e : s->events) {
      if (e.kind == EventKind::kFixate) fix_count_sum += 1.0;
    }
  }
  const double n = static_cast<double>(sessions.size());
  stats.tct_mean_ms = tct_sum / n;
  stats.n_fixations_mean = fix_count_sum / n;

  double sq_sum = 0.0;
  for (const auto* s : sessions) {
    const double d = s->tct_ms - stats.tct_mean_ms;
    sq_sum += d * d;
  }
  stats.tct_std_ms = std::sqrt(sq_sum / n);

  auto& hist = stats.fixation_durations;
  hist.mass.assign(hist.n_bins, 0.0);
  double total_fixations = 0.0;
  for (const auto* s : sessions) {
    for (const auto& e : s->events) {
      if (e.kind != EventKind::kFixate) continue;
      int bin = static_cast<int>(e.duration_ms / hist.bin_width_ms);
      bin = std::clamp(bin, 0, hist.n_bins - 1);
      hist.mass[bin] += 1.0;
      total_fixations += 1.0;
    }
  }
  if (total_fixations > 0.0) {
    for (auto& m : hist.mass) m /= total_fixations;
  }

  stats.gaze_to_target.assign(n_items, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> share_sum(n_items, 0.0);
  std::vector<std::size_t> share_n(n_items, 0);
  for (const auto* s : sessions) {
    if (s->target_slot < 0 || s->target_slot >= n_items) continue;
    double fixations = 0.0;
    double on_target = 0.0;
    for (const auto& e : s->events) {
      if (e.kind != EventKind::kFixate) continue;
      fixations += 1.0;
      if (e.slot == s->target_slot) on_target += 1.0;
    }
    if (fixations == 0.0) continue;
    share_sum[s->target_slot] += on_target / fixations;
    share_n[s->target_slot] += 1;
  }
  for (int slot = 0; slot < n_items; ++slot) {
    if (share_n[slot] > 0) {
      stats.gaze_to_target[slot] = share_sum[slot] / static_cast<double>(share_n[slot]);
    }
  }
  return stats;
}

}  // namespace

BehaviorSummary summarize(const std::vector<SessionLog>& sessions, std::size_t subset,
                          int n_items) {
  const std::size_t count = std::min(subset, sessions.size());
  std::vector<const SessionLog*> all_sessions, abs_sessions, pre_sessions;
  all_sessions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const SessionLog* s = &sessions[i];
    all_sessions.push_back(s);
    if (s->condition == SessionCondition::kAbsent) {
      abs_sessions.push_back(s);
    } else {
      pre_sessions.push_back(s);
    }
  }

  BehaviorSummary summary;
  if (!all_sessions.empty()) summary.all = compute_stats(all_sessions, n_items);
  if (!abs_sessions.empty()) summary.abs = compute_stats(abs_sessions, n_items);
  if (!pre_sessions.empty()) summary.pre = compute_stats(pre_sessions, n_items);
  return summary;
}

void write_sessions_csv(std::ostream& out, const std::vector<SessionLog>& sessions) {
  out << "session_id,condition,event_index,action,slot,duration_ms\n";
  char buf[64];
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const auto& s = sessions[i];
    const char* condition = s.condition == SessionCondition::kAbsent ? "abs" : "pre";
    for (std::size_t j = 0; j < s.events.size(); ++j) {
      const auto& e = s.events[j];
      const char* action = e.kind == EventKind::kFixate ? "fixate"
                           : e.kind == EventKind::kSelect ? "select"
                                                          : "quit";
      std::snprintf(buf, sizeof(buf), "%.17g", e.duration_ms);
      out << i << ',' << condition << ',' << j << ',' << action << ','
          << (e.slot + 1) << ',' << buf << '\n';
    }
  }
}

}  // namespace menuabc
