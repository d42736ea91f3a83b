#include "menuabc/menu_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace menuabc {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::kBaseline: return "baseline";
    case Variant::kV1: return "v1";
    case Variant::kV2: return "v2";
    case Variant::kV3: return "v3";
  }
  return "baseline";
}

Variant variant_from_string(const std::string& s) {
  if (s == "baseline") return Variant::kBaseline;
  if (s == "v1") return Variant::kV1;
  if (s == "v2") return Variant::kV2;
  if (s == "v3") return Variant::kV3;
  throw std::invalid_argument("unknown variant '" + s + "'");
}

void ModelParameters::validate() const {
  if (!(f_dur_ms > 0.0)) throw std::invalid_argument("f_dur must be > 0");
  if (d_sel_ms < 0.0) throw std::invalid_argument("d_sel must be >= 0");
  if (p_rec < 0.0 || p_rec > 1.0) throw std::invalid_argument("p_rec must be in [0,1]");
  if (p_sem < 0.0 || p_sem > 1.0) throw std::invalid_argument("p_sem must be in [0,1]");
}

void LayoutConfig::validate() const {
  if (n_items < 2 || n_items > 12) throw std::invalid_argument("n_items must be in [2,12]");
  if (absent_prob < 0.0 || absent_prob > 1.0) {
    throw std::invalid_argument("absent_prob must be in [0,1]");
  }
  if (!(reward_big_ms > 0.0)) throw std::invalid_argument("reward_big must be > 0");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (!(med_threshold < high_threshold)) {
    throw std::invalid_argument("level thresholds must be ordered");
  }
}

MenuEnv::MenuEnv(LayoutConfig layout, ModelParameters params)
    : layout_(std::move(layout)), params_(params) {
  layout_.validate();
  params_.validate();
}

std::uint32_t MenuEnv::n_states() const {
  std::uint32_t codes = 1;
  for (int i = 0; i < layout_.n_items; ++i) codes *= 4;
  return codes * static_cast<std::uint32_t>(layout_.n_items + 1);
}

std::uint32_t MenuEnv::encode(const AgentObservation& obs) const {
  std::uint32_t code = 0;
  for (int i = layout_.n_items - 1; i >= 0; --i) {
    code = code * 4 + static_cast<std::uint32_t>(obs.known_levels[i]);
  }
  const auto fix = static_cast<std::uint32_t>(obs.fixation_slot + 1);
  std::uint32_t codes = 1;
  for (int i = 0; i < layout_.n_items; ++i) codes *= 4;
  return fix * codes + code;
}

int MenuEnv::discretize(double relevance) const {
  if (relevance >= layout_.high_threshold) return kLevelHigh;
  if (relevance >= layout_.med_threshold) return kLevelMed;
  return kLevelLow;
}

int MenuEnv::group_of(int slot) const {
  // Two semantic groups of equal size; a menu with fewer than four items is
  // treated as a single group.
  if (layout_.n_items < 4) return 0;
  return slot < layout_.n_items / 2 ? 0 : 1;
}

MenuInstance MenuEnv::build_menu(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MenuInstance menu;
  menu.relevances.resize(layout_.n_items);
  menu.target_present = unit(rng) >= layout_.absent_prob;

  int relevant_group;
  if (menu.target_present) {
    std::uniform_int_distribution<int> slot_dist(0, layout_.n_items - 1);
    menu.target_slot = slot_dist(rng);
    relevant_group = group_of(menu.target_slot);
  } else {
    menu.target_slot = -1;
    relevant_group = std::uniform_int_distribution<int>(0, 1)(rng);
    if (layout_.n_items < 4) relevant_group = 0;
  }

  auto band = [&](double lo, double hi) {
    return lo + unit(rng) * (hi - lo);
  };
  for (int i = 0; i < layout_.n_items; ++i) {
    if (i == menu.target_slot) {
      menu.relevances[i] = band(layout_.target_band_lo, layout_.target_band_hi);
    } else if (group_of(i) == relevant_group) {
      menu.relevances[i] = band(layout_.group_band_lo, layout_.group_band_hi);
    } else {
      menu.relevances[i] = band(layout_.other_band_lo, layout_.other_band_hi);
    }
  }
  return menu;
}

EnvState MenuEnv::reset(Rng& rng) const {
  EnvState state;
  state.menu = build_menu(rng);
  state.obs.known_levels.assign(layout_.n_items, kLevelUnknown);
  state.obs.fixation_slot = -1;
  if (layout_.fully_observable) {
    for (int i = 0; i < layout_.n_items; ++i) {
      state.obs.known_levels[i] = discretize(state.menu.relevances[i]);
    }
  }
  return state;
}

double MenuEnv::saccade_ms(int from_slot, int to_slot) const {
  const double slots = from_slot < 0 ? 0.0 : std::abs(to_slot - from_slot);
  const double amplitude_deg = slots * layout_.item_pitch_deg;
  return layout_.saccade_intercept_ms + layout_.saccade_slope_ms_per_deg * amplitude_deg;
}

StepResult MenuEnv::step(EnvState& state, int action, Rng& rng) const {
  if (state.terminal) {
    throw std::logic_error("step: episode already terminal");
  }
  if (action < 0 || action >= n_actions()) {
    throw std::invalid_argument("step: invalid action");
  }
  StepResult result;
  state.steps += 1;

  if (is_fixate(action)) {
    const int slot = action;
    result.reward_ms = -(saccade_ms(state.obs.fixation_slot, slot) + params_.f_dur_ms);
    state.obs.fixation_slot = slot;
    state.obs.known_levels[slot] = discretize(state.menu.relevances[slot]);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool recalled = false;
    if (!state.fixated_once) {
      state.fixated_once = true;
      const double p_rec = params_.effective_p_rec();
      if (p_rec > 0.0 && unit(rng) < p_rec) {
        for (int i = 0; i < layout_.n_items; ++i) {
          state.obs.known_levels[i] = discretize(state.menu.relevances[i]);
        }
        recalled = true;
      }
    }
    const double p_sem = params_.effective_p_sem();
    if (!recalled && p_sem > 0.0) {
      if (slot > 0 && unit(rng) < p_sem) {
        state.obs.known_levels[slot - 1] = discretize(state.menu.relevances[slot - 1]);
      }
      if (slot + 1 < layout_.n_items && unit(rng) < p_sem) {
        state.obs.known_levels[slot + 1] = discretize(state.menu.relevances[slot + 1]);
      }
    }
    return result;
  }

  if (action == select_action()) {
    result.done = true;
    result.correct = state.menu.target_present && state.obs.fixation_slot >= 0 &&
                     state.obs.fixation_slot == state.menu.target_slot;
  } else {  // quit
    result.done = true;
    result.correct = !state.menu.target_present;
  }
  result.reward_ms = result.correct ? layout_.reward_big_ms : -layout_.reward_big_ms;
  state.terminal = true;
  return result;
}

void QLearningConfig::validate() const {
  if (!(alpha0 > 0.0) || alpha0 > 1.0) throw std::invalid_argument("alpha0 must be in (0,1]");
  if (!(alpha_visits > 0.0)) throw std::invalid_argument("alpha_visits must be > 0");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in [0,1]");
  if (eps_start < 0.0 || eps_start > 1.0 || eps_end < 0.0 || eps_end > 1.0) {
    throw std::invalid_argument("epsilon bounds must be in [0,1]");
  }
}

PolicyTable::PolicyTable(std::uint32_t n_states, int n_actions, double q_init)
    : n_states_(n_states),
      n_actions_(n_actions),
      q_(static_cast<std::size_t>(n_states) * n_actions, q_init) {}

int PolicyTable::greedy_action(std::uint32_t state) const {
  const double* row = &q_[static_cast<std::size_t>(state) * n_actions_];
  int best = 0;
  for (int a = 1; a < n_actions_; ++a) {
    if (row[a] > row[best]) best = a;
  }
  return best;
}

double PolicyTable::max_q(std::uint32_t state) const {
  const double* row = &q_[static_cast<std::size_t>(state) * n_actions_];
  return *std::max_element(row, row + n_actions_);
}

PolicyTable train_policy(const MenuEnv& env, std::uint64_t episodes,
                         const QLearningConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::uint32_t n_states = env.n_states();
  const int n_actions = env.n_actions();
  PolicyTable policy(n_states, n_actions, cfg.q_init);
  std::vector<std::uint32_t> visits(static_cast<std::size_t>(n_states) * n_actions, 0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> any_action(0, n_actions - 1);

  for (std::uint64_t episode = 0; episode < episodes; ++episode) {
    const double frac = episodes > 0 ? static_cast<double>(episode) / episodes : 0.0;
    const double eps = cfg.eps_start + (cfg.eps_end - cfg.eps_start) * frac;

    EnvState state = env.reset(rng);
    while (!state.terminal && state.steps < env.layout().max_steps) {
      const std::uint32_t code = env.encode(state.obs);
      const int action =
          unit(rng) < eps ? any_action(rng) : policy.greedy_action(code);
      const StepResult res = env.step(state, action, rng);

      const std::size_t idx = static_cast<std::size_t>(code) * n_actions + action;
      const double alpha =
          cfg.alpha0 * cfg.alpha_visits / (cfg.alpha_visits + visits[idx]);
      visits[idx] += 1;

      double target = res.reward_ms;
      if (!res.done) {
        target += cfg.gamma * policy.max_q(env.encode(state.obs));
      }
      double& q = policy.q(code, action);
      q += alpha * (target - q);
      if (res.done) break;
    }
  }
  return policy;
}

std::vector<SessionLog> simulate_sessions(const PolicyTable& policy, const MenuEnv& env,
                                          std::size_t n, Rng& rng) {
  std::vector<SessionLog> sessions;
  sessions.reserve(n);
  const double d_sel = env.params().effective_d_sel();

  for (std::size_t i = 0; i < n; ++i) {
    EnvState state = env.reset(rng);
    SessionLog log;
    log.condition = state.menu.target_present ? SessionCondition::kPresent
                                              : SessionCondition::kAbsent;
    log.target_slot = state.menu.target_slot;
    int last_fixation_event = -1;
    bool done = false;

    while (!done && state.steps < env.layout().max_steps) {
      const int action = policy.greedy_action(env.encode(state.obs));
      const int fixation_before = state.obs.fixation_slot;
      const StepResult res = env.step(state, action, rng);

      if (env.is_fixate(action)) {
        log.events.push_back({EventKind::kFixate, -res.reward_ms, action});
        last_fixation_event = static_cast<int>(log.events.size()) - 1;
      } else if (action == env.select_action()) {
        double select_duration = 0.0;
        if (d_sel > 0.0) {
          if (last_fixation_event >= 0) {
            log.events[last_fixation_event].duration_ms += d_sel;
          } else {
            select_duration = d_sel;
          }
        }
        log.events.push_back({EventKind::kSelect, select_duration, fixation_before});
      } else {
        log.events.push_back({EventKind::kQuit, 0.0, -1});
      }
      if (res.done) {
        done = true;
        log.correct = res.correct;
      }
    }
    if (!done) {
      // Step cap reached: the session ends as if the agent declared the
      // target absent.
      log.events.push_back({EventKind::kQuit, 0.0, -1});
      log.correct = !state.menu.target_present;
    }
    double tct = 0.0;
    for (const auto& event : log.events) tct += event.duration_ms;
    log.tct_ms = tct;
    sessions.push_back(std::move(log));
  }
  return sessions;
}

}  // namespace menuabc
