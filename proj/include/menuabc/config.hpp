#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "menuabc/discrepancy.hpp"
#include "menuabc/inference.hpp"
#include "menuabc/menu_model.hpp"
#include "menuabc/param_space.hpp"

namespace menuabc {

enum class StudyPreset {
  kStudy1,
  kStudy2Baseline,
  kStudy2V1,
  kStudy2V2,
  kStudy2V3,
  kStudy3,
  kCustom,
};

const char* to_string(StudyPreset preset);
StudyPreset preset_from_string(const std::string& s);

struct Budgets {
  std::uint64_t training_episodes = 100000;
  std::size_t sessions = 2500;
  std::size_t subset = 2500;
  std::size_t n_init = 8;
  std::size_t acquisitions = 32;
  std::size_t workers = 1;

  void validate() const;
};

struct RunConfig {
  StudyPreset preset = StudyPreset::kCustom;
  ParameterSpace space;                  // inferred axes
  std::map<std::string, double> fixed;   // fixed parameters by name
  Variant variant = Variant::kBaseline;
  DiscrepancyConfig discrepancy;
  Budgets budgets;
  LayoutConfig layout;
  QLearningConfig qlearning;
  KernelConfig kernel;
  AcquisitionConfig acquisition;         // n_init mirrored from budgets
  std::size_t refit_every = 1;
  EpsilonRule epsilon_rule = EpsilonRule::kMinGpMean;
  bool standardize_discrepancies = true;
  std::uint64_t master_seed = 0;
  std::string out_dir = "out";
  std::map<std::string, double> ground_truth;  // theta* for synthetic observed data
  std::string observed_summary_path;           // alternative: load observed stats
  std::size_t reject_n_samples = 1000;
  double reject_quantile = 0.1;

  void validate() const;
};

// Defaults for a preset; kCustom has no axes until the user supplies them.
RunConfig preset_defaults(StudyPreset preset);

// Strict loader: unknown keys are rejected by name, study-identity fields
// (axes, variant, fixed, discrepancy) conflict with non-custom presets, and
// every constraint violation names the offending field.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace menuabc
