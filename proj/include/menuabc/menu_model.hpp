#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "menuabc/rng.hpp"

namespace menuabc {

// Model variants are cumulative: v1 adds the selection delay, v2 adds menu
// recall on the first fixation, v3 adds peripheral perception of the items
// above and below the fixated one.
enum class Variant { kBaseline, kV1, kV2, kV3 };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct ModelParameters {
  double f_dur_ms = 400.0;  // fixation duration
  double d_sel_ms = 0.0;    // selection delay, v1+
  double p_rec = 0.0;       // menu recall probability, v2+
  double p_sem = 0.0;       // peripheral semantic perception probability, v3+
  Variant variant = Variant::kBaseline;

  // Parameters beyond the variant level are ignored.
  double effective_d_sel() const { return variant >= Variant::kV1 ? d_sel_ms : 0.0; }
  double effective_p_rec() const { return variant >= Variant::kV2 ? p_rec : 0.0; }
  double effective_p_sem() const { return variant >= Variant::kV3 ? p_sem : 0.0; }

  void validate() const;
};

struct LayoutConfig {
  int n_items = 8;
  double absent_prob = 0.10;

  // Relevance bands: the target, its group mates, and the other group.
  // Absent menus draw the "relevant" group from the group band, so no item
  // ever reaches the target band.
  double target_band_lo = 0.8, target_band_hi = 1.0;
  double group_band_lo = 0.3, group_band_hi = 0.6;
  double other_band_lo = 0.0, other_band_hi = 0.3;

  // Discretization thresholds for the policy state (low / med / high).
  double med_threshold = 0.3;
  double high_threshold = 0.8;

  // Saccade timing: duration = intercept + slope * amplitude_deg, with
  // amplitude = slot distance * item pitch. Tuning defaults, configurable.
  double item_pitch_deg = 1.5;
  double saccade_intercept_ms = 37.0;
  double saccade_slope_ms_per_deg = 2.7;

  // Terminal reward magnitude in ms-equivalents.
  double reward_big_ms = 10000.0;

  int max_steps = 32;

  // Diagnostic mode used by the small-MDP oracle tests: every relevance is
  // revealed at episode start.
  bool fully_observable = false;

  int n_actions() const { return n_items + 2; }
  void validate() const;
};

struct MenuInstance {
  std::vector<double> relevances;  // one per slot
  bool target_present = false;
  int target_slot = -1;  // 0-based; -1 when absent
};

// Discretized relevance levels as seen by the agent.
inline constexpr int kLevelUnknown = 0;
inline constexpr int kLevelLow = 1;
inline constexpr int kLevelMed = 2;
inline constexpr int kLevelHigh = 3;

struct AgentObservation {
  std::vector<int> known_levels;  // one level per slot, kLevelUnknown if unseen
  int fixation_slot = -1;         // 0-based; -1 before the first fixation
};

struct EnvState {
  MenuInstance menu;
  AgentObservation obs;
  bool terminal = false;
  bool fixated_once = false;
  int steps = 0;
};

struct StepResult {
  double reward_ms = 0.0;  // time costs are negative, end rewards +/- reward_big
  bool done = false;
  bool correct = false;  // meaningful when done
};

// The menu-search MDP. Actions 0..n_items-1 fixate that slot; n_items
// selects the fixated item; n_items+1 quits (declares the target absent).
class MenuEnv {
 public:
  MenuEnv(LayoutConfig layout, ModelParameters params);

  const LayoutConfig& layout() const { return layout_; }
  const ModelParameters& params() const { return params_; }

  int n_actions() const { return layout_.n_actions(); }
  int select_action() const { return layout_.n_items; }
  int quit_action() const { return layout_.n_items + 1; }
  bool is_fixate(int action) const { return action >= 0 && action < layout_.n_items; }

  // Discretized observation count: fixation slot (none or 1..n) times four
  // levels per slot.
  std::uint32_t n_states() const;
  std::uint32_t encode(const AgentObservation& obs) const;

  MenuInstance build_menu(Rng& rng) const;
  EnvState reset(Rng& rng) const;
  StepResult step(EnvState& state, int action, Rng& rng) const;

  double saccade_ms(int from_slot, int to_slot) const;  // from_slot -1 = no prior fixation
  int discretize(double relevance) const;

 private:
  int group_of(int slot) const;

  LayoutConfig layout_;
  ModelParameters params_;
};

struct QLearningConfig {
  double alpha0 = 0.1;
  // Harmonic step-size decay per state-action pair:
  // alpha(n) = alpha0 * alpha_visits / (alpha_visits + n).
  double alpha_visits = 1000.0;
  double gamma = 1.0;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double q_init = 0.0;

  void validate() const;
};

// Tabular action values over the discretized observation space. Immutable
// after training; safe to share across reader threads.
class PolicyTable {
 public:
  PolicyTable(std::uint32_t n_states, int n_actions, double q_init);

  double q(std::uint32_t state, int action) const {
    return q_[static_cast<std::size_t>(state) * n_actions_ + action];
  }
  double& q(std::uint32_t state, int action) {
    return q_[static_cast<std::size_t>(state) * n_actions_ + action];
  }
  int greedy_action(std::uint32_t state) const;  // lowest index wins ties
  double max_q(std::uint32_t state) const;

  std::uint32_t n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }

 private:
  std::uint32_t n_states_ = 0;
  int n_actions_ = 0;
  std::vector<double> q_;
};

// One-step Q-learning with epsilon-greedy exploration; epsilon decays
// linearly from eps_start to eps_end over the episode budget.
PolicyTable train_policy(const MenuEnv& env, std::uint64_t episodes,
                         const QLearningConfig& cfg, Rng& rng);

enum class SessionCondition { kAbsent, kPresent };
enum class EventKind { kFixate, kSelect, kQuit };

struct SessionEvent {
  EventKind kind;
  double duration_ms = 0.0;
  int slot = -1;  // 0-based; -1 when not applicable
};

struct SessionLog {
  std::vector<SessionEvent> events;
  SessionCondition condition = SessionCondition::kPresent;
  bool correct = false;
  double tct_ms = 0.0;  // equals the sum of event durations
  int target_slot = -1;
};

// Greedy rollouts of a trained policy. Fixation events carry the full time
// cost of the action (saccade + fixation); the selection delay is folded
// into the last fixation's duration.
std::vector<SessionLog> simulate_sessions(const PolicyTable& policy, const MenuEnv& env,
                                          std::size_t n, Rng& rng);

}  // namespace menuabc
