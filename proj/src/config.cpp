#include "menuabc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace menuabc {

namespace {

using nlohmann::json;

const std::set<std::string> kParameterNames = {"f_dur", "d_sel", "p_rec", "p_sem"};

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument("config: " + message);
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      fail("unknown key \"" + key + "\" in " + where);
    }
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.at(key).is_number()) fail("field \"" + where + "." + key + "\" must be a number");
  return obj.at(key).get<double>();
}

PriorSpec parse_prior(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
  require_keys(j, where, {"kind", "mean", "std", "min", "max"});
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "uniform") {
      return PriorSpec::uniform(get_number(j, where, "min"), get_number(j, where, "max"));
    }
    if (kind == "truncated-gaussian") {
      return PriorSpec::truncated_gaussian(
          get_number(j, where, "mean"), get_number(j, where, "std"),
          get_number(j, where, "min"), get_number(j, where, "max"));
    }
  } catch (const std::invalid_argument& e) {
    fail(where + ": " + e.what());
  }
  fail(where + ": unknown prior kind \"" + kind + "\"");
}

std::vector<ParameterAxis> parse_axes(const json& j) {
  if (!j.is_array()) fail("\"axes\" must be an array");
  std::vector<ParameterAxis> axes;
  for (const auto& item : j) {
    require_keys(item, "axes[]", {"name", "lower", "upper", "prior"});
    ParameterAxis axis;
    axis.name = item.at("name").get<std::string>();
    if (!kParameterNames.count(axis.name)) {
      fail("unknown key \"" + axis.name + "\" in axes (expected a model parameter name)");
    }
    axis.lower = get_number(item, "axes[]", "lower");
    axis.upper = get_number(item, "axes[]", "upper");
    axis.prior = parse_prior(item.at("prior"), "axes[].prior");
    try {
      axis.validate();
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    axes.push_back(std::move(axis));
  }
  return axes;
}

std::map<std::string, double> parse_parameter_map(const json& j, const std::string& where) {
  if (!j.is_object()) fail("\"" + where + "\" must be an object");
  std::map<std::string, double> values;
  for (const auto& [key, value] : j.items()) {
    if (!kParameterNames.count(key)) {
      fail("unknown key \"" + key + "\" in " + where);
    }
    if (!value.is_number()) fail("field \"" + where + "." + key + "\" must be a number");
    values[key] = value.get<double>();
  }
  return values;
}

void apply_budgets(const json& j, Budgets& budgets) {
  require_keys(j, "budgets",
               {"training_episodes", "sessions", "subset", "n_init", "acquisitions",
                "workers"});
  if (j.contains("training_episodes")) {
    budgets.training_episodes = j.at("training_episodes").get<std::uint64_t>();
  }
  if (j.contains("sessions")) budgets.sessions = j.at("sessions").get<std::size_t>();
  if (j.contains("subset")) budgets.subset = j.at("subset").get<std::size_t>();
  if (j.contains("n_init")) budgets.n_init = j.at("n_init").get<std::size_t>();
  if (j.contains("acquisitions")) budgets.acquisitions = j.at("acquisitions").get<std::size_t>();
  if (j.contains("workers")) budgets.workers = j.at("workers").get<std::size_t>();
}

void apply_layout(const json& j, LayoutConfig& layout) {
  require_keys(j, "layout",
               {"n_items", "absent_prob", "target_band_lo", "target_band_hi",
                "group_band_lo", "group_band_hi", "other_band_lo", "other_band_hi",
                "med_threshold", "high_threshold", "item_pitch_deg",
                "saccade_intercept_ms", "saccade_slope_ms_per_deg", "reward_big_ms",
                "max_steps", "fully_observable"});
  if (j.contains("n_items")) layout.n_items = j.at("n_items").get<int>();
  if (j.contains("absent_prob")) layout.absent_prob = get_number(j, "layout", "absent_prob");
  if (j.contains("target_band_lo")) layout.target_band_lo = get_number(j, "layout", "target_band_lo");
  if (j.contains("target_band_hi")) layout.target_band_hi = get_number(j, "layout", "target_band_hi");
  if (j.contains("group_band_lo")) layout.group_band_lo = get_number(j, "layout", "group_band_lo");
  if (j.contains("group_band_hi")) layout.group_band_hi = get_number(j, "layout", "group_band_hi");
  if (j.contains("other_band_lo")) layout.other_band_lo = get_number(j, "layout", "other_band_lo");
  if (j.contains("other_band_hi")) layout.other_band_hi = get_number(j, "layout", "other_band_hi");
  if (j.contains("med_threshold")) layout.med_threshold = get_number(j, "layout", "med_threshold");
  if (j.contains("high_threshold")) layout.high_threshold = get_number(j, "layout", "high_threshold");
  if (j.contains("item_pitch_deg")) layout.item_pitch_deg = get_number(j, "layout", "item_pitch_deg");
  if (j.contains("saccade_intercept_ms")) {
    layout.saccade_intercept_ms = get_number(j, "layout", "saccade_intercept_ms");
  }
  if (j.contains("saccade_slope_ms_per_deg")) {
    layout.saccade_slope_ms_per_deg = get_number(j, "layout", "saccade_slope_ms_per_deg");
  }
  if (j.contains("reward_big_ms")) layout.reward_big_ms = get_number(j, "layout", "reward_big_ms");
  if (j.contains("max_steps")) layout.max_steps = j.at("max_steps").get<int>();
  if (j.contains("fully_observable")) layout.fully_observable = j.at("fully_observable").get<bool>();
}

void apply_qlearning(const json& j, QLearningConfig& q) {
  require_keys(j, "qlearning",
               {"alpha0", "alpha_visits", "gamma", "eps_start", "eps_end", "q_init"});
  if (j.contains("alpha0")) q.alpha0 = get_number(j, "qlearning", "alpha0");
  if (j.contains("alpha_visits")) q.alpha_visits = get_number(j, "qlearning", "alpha_visits");
  if (j.contains("gamma")) q.gamma = get_number(j, "qlearning", "gamma");
  if (j.contains("eps_start")) q.eps_start = get_number(j, "qlearning", "eps_start");
  if (j.contains("eps_end")) q.eps_end = get_number(j, "qlearning", "eps_end");
  if (j.contains("q_init")) q.q_init = get_number(j, "qlearning", "q_init");
}

void apply_kernel(const json& j, KernelConfig& kernel) {
  require_keys(j, "kernel", {"variance", "lengthscale", "noise_variance"});
  if (j.contains("variance")) kernel.variance = get_number(j, "kernel", "variance");
  if (j.contains("lengthscale")) kernel.lengthscale = get_number(j, "kernel", "lengthscale");
  if (j.contains("noise_variance")) {
    kernel.noise_variance = get_number(j, "kernel", "noise_variance");
  }
}

void apply_acquisition(const json& j, AcquisitionConfig& acq) {
  require_keys(j, "acquisition",
               {"lcb_multiplier", "repulsion_amplitude", "repulsion_scale",
                "prior_draw_prob", "n_candidates", "refine_steps"});
  if (j.contains("lcb_multiplier")) acq.lcb_multiplier = get_number(j, "acquisition", "lcb_multiplier");
  if (j.contains("repulsion_amplitude")) {
    acq.repulsion_amplitude = get_number(j, "acquisition", "repulsion_amplitude");
  }
  if (j.contains("repulsion_scale")) {
    acq.repulsion_scale = get_number(j, "acquisition", "repulsion_scale");
  }
  if (j.contains("prior_draw_prob")) {
    acq.prior_draw_prob = get_number(j, "acquisition", "prior_draw_prob");
  }
  if (j.contains("n_candidates")) acq.n_candidates = j.at("n_candidates").get<std::size_t>();
  if (j.contains("refine_steps")) acq.refine_steps = j.at("refine_steps").get<int>();
}

void apply_engine(const json& j, RunConfig& cfg) {
  require_keys(j, "engine", {"refit_every", "epsilon_rule", "standardize"});
  if (j.contains("refit_every")) cfg.refit_every = j.at("refit_every").get<std::size_t>();
  if (j.contains("epsilon_rule")) {
    const std::string rule = j.at("epsilon_rule").get<std::string>();
    if (rule == "min-gp-mean") {
      cfg.epsilon_rule = EpsilonRule::kMinGpMean;
    } else if (rule == "min-observed") {
      cfg.epsilon_rule = EpsilonRule::kMinObserved;
    } else {
      fail("unknown epsilon_rule \"" + rule + "\"");
    }
  }
  if (j.contains("standardize")) {
    cfg.standardize_discrepancies = j.at("standardize").get<bool>();
  }
}

void apply_discrepancy(const json& j, DiscrepancyConfig& d) {
  require_keys(j, "discrepancy", {"a", "b", "mode"});
  if (j.contains("a")) d.a = get_number(j, "discrepancy", "a");
  if (j.contains("b")) d.b = get_number(j, "discrepancy", "b");
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "aggregate") {
      d.mode = DiscrepancyMode::kAggregate;
    } else if (mode == "split-conditions") {
      d.mode = DiscrepancyMode::kSplitConditions;
    } else {
      fail("unknown discrepancy mode \"" + mode + "\"");
    }
  }
}

ParameterAxis make_axis(const std::string& name, double lower, double upper, PriorSpec prior) {
  ParameterAxis axis;
  axis.name = name;
  axis.lower = lower;
  axis.upper = upper;
  axis.prior = std::move(prior);
  return axis;
}

}  // namespace

const char* to_string(StudyPreset preset) {
  switch (preset) {
    case StudyPreset::kStudy1: return "study1";
    case StudyPreset::kStudy2Baseline: return "study2-baseline";
    case StudyPreset::kStudy2V1: return "study2-v1";
    case StudyPreset::kStudy2V2: return "study2-v2";
    case StudyPreset::kStudy2V3: return "study2-v3";
    case StudyPreset::kStudy3: return "study3";
    case StudyPreset::kCustom: return "custom";
  }
  return "custom";
}

StudyPreset preset_from_string(const std::string& s) {
  if (s == "study1") return StudyPreset::kStudy1;
  if (s == "study2-baseline") return StudyPreset::kStudy2Baseline;
  if (s == "study2-v1") return StudyPreset::kStudy2V1;
  if (s == "study2-v2") return StudyPreset::kStudy2V2;
  if (s == "study2-v3") return StudyPreset::kStudy2V3;
  if (s == "study3") return StudyPreset::kStudy3;
  if (s == "custom") return StudyPreset::kCustom;
  fail("unknown preset \"" + s + "\"");
}

void Budgets::validate() const {
  if (training_episodes == 0) fail("budgets.training_episodes must be > 0");
  if (sessions == 0) fail("budgets.sessions must be > 0");
  if (subset == 0) fail("budgets.subset must be > 0");
  if (acquisitions + n_init == 0) fail("budgets: n_init + acquisitions must be > 0");
  if (workers == 0) fail("budgets.workers must be > 0");
}

void RunConfig::validate() const {
  budgets.validate();
  for (const auto& axis : space.axes()) {
    if (fixed.count(axis.name)) {
      fail("parameter \"" + axis.name + "\" is both fixed and inferred");
    }
  }
  for (const auto& [name, value] : ground_truth) {
    bool is_axis = false;
    for (const auto& axis : space.axes()) {
      if (axis.name == name) is_axis = true;
    }
    if (!is_axis) {
      fail("ground_truth key \"" + name + "\" is not an inferred axis");
    }
  }
  if (!ground_truth.empty() && !observed_summary_path.empty()) {
    fail("ground_truth and observed_summary are mutually exclusive");
  }
  discrepancy.validate();
  layout.validate();
  qlearning.validate();
  kernel.validate();
  acquisition.validate();
  if (!(reject_quantile > 0.0) || reject_quantile > 1.0) {
    fail("rejection.accept_quantile must be in (0,1]");
  }
}

RunConfig preset_defaults(StudyPreset preset) {
  RunConfig cfg;
  cfg.preset = preset;

  const auto f_dur_axis = make_axis(
      "f_dur", 0.0, 600.0, PriorSpec::truncated_gaussian(300.0, 100.0, 0.0, 600.0));
  const auto d_sel_axis = make_axis(
      "d_sel", 0.0, 1000.0, PriorSpec::truncated_gaussian(300.0, 300.0, 0.0, 1000.0));
  const auto p_rec_axis = make_axis("p_rec", 0.0, 1.0, PriorSpec::uniform(0.0, 1.0));
  const auto p_sem_axis = make_axis("p_sem", 0.0, 1.0, PriorSpec::uniform(0.0, 1.0));

  switch (preset) {
    case StudyPreset::kStudy1:
      cfg.space = ParameterSpace({f_dur_axis});
      cfg.variant = Variant::kBaseline;
      cfg.discrepancy.mode = DiscrepancyMode::kAggregate;
      cfg.budgets.acquisitions = 32;
      cfg.ground_truth = {{"f_dur", 300.0}};
      break;
    case StudyPreset::kStudy2Baseline:
      cfg.space = ParameterSpace({f_dur_axis});
      cfg.variant = Variant::kBaseline;
      cfg.discrepancy.mode = DiscrepancyMode::kSplitConditions;
      cfg.budgets.acquisitions = 32;
      cfg.ground_truth = {{"f_dur", 300.0}};
      break;
    case StudyPreset::kStudy2V1:
      cfg.space = ParameterSpace({f_dur_axis, d_sel_axis});
      cfg.variant = Variant::kV1;
      cfg.discrepancy.mode = DiscrepancyMode::kSplitConditions;
      cfg.budgets.acquisitions = 40;
      cfg.ground_truth = {{"f_dur", 280.0}, {"d_sel", 290.0}};
      break;
    case StudyPreset::kStudy2V2:
      cfg.space = ParameterSpace({f_dur_axis, d_sel_axis, p_rec_axis});
      cfg.variant = Variant::kV2;
      cfg.discrepancy.mode = DiscrepancyMode::kSplitConditions;
      cfg.budgets.acquisitions = 48;
      cfg.ground_truth = {{"f_dur", 280.0}, {"d_sel", 290.0}, {"p_rec", 0.69}};
      break;
    case StudyPreset::kStudy2V3:
      cfg.space = ParameterSpace({f_dur_axis, d_sel_axis, p_rec_axis, p_sem_axis});
      cfg.variant = Variant::kV3;
      cfg.discrepancy.mode = DiscrepancyMode::kSplitConditions;
      cfg.budgets.acquisitions = 60;
      cfg.ground_truth = {
          {"f_dur", 280.0}, {"d_sel", 290.0}, {"p_rec", 0.69}, {"p_sem", 0.93}};
      break;
    case StudyPreset::kStudy3:
      cfg.space = ParameterSpace({
          make_axis("p_rec", 0.0, 1.0,
                    PriorSpec::truncated_gaussian(0.69, 0.20, 0.0, 1.0)),
          make_axis("p_sem", 0.0, 1.0,
                    PriorSpec::truncated_gaussian(0.93, 0.20, 0.0, 1.0)),
      });
      cfg.variant = Variant::kV3;
      cfg.fixed = {{"f_dur", 280.0}, {"d_sel", 290.0}};
      cfg.discrepancy.mode = DiscrepancyMode::kSplitConditions;
      cfg.budgets.acquisitions = 60;
      cfg.budgets.subset = 200;
      cfg.ground_truth = {{"p_rec", 0.7}, {"p_sem", 0.9}};
      break;
    case StudyPreset::kCustom:
      break;
  }
  cfg.acquisition.n_init = cfg.budgets.n_init;
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') line += 1;
    }
    fail("parse error near line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");

  require_keys(j, "top level",
               {"schema_version", "preset", "seed", "out_dir", "axes", "fixed", "variant",
                "ground_truth", "observed_summary", "budgets", "discrepancy", "layout",
                "qlearning", "kernel", "acquisition", "engine", "rejection"});

  if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1) {
    fail("unsupported schema_version (expected 1)");
  }

  const StudyPreset preset =
      preset_from_string(j.contains("preset") ? j.at("preset").get<std::string>() : "custom");
  RunConfig cfg = preset_defaults(preset);

  // Study-identity fields belong to the preset; a non-custom preset rejects
  // user-supplied values rather than silently overriding either side.
  const bool custom = preset == StudyPreset::kCustom;
  for (const char* key : {"axes", "variant", "fixed", "discrepancy"}) {
    if (!custom && j.contains(key)) {
      fail(std::string("field \"") + key + "\" conflicts with preset \"" +
           to_string(preset) + "\"");
    }
  }
  if (custom) {
    if (!j.contains("axes")) fail("custom preset requires \"axes\"");
    cfg.space = ParameterSpace(parse_axes(j.at("axes")));
    if (j.contains("variant")) {
      cfg.variant = variant_from_string(j.at("variant").get<std::string>());
    }
    if (j.contains("fixed")) cfg.fixed = parse_parameter_map(j.at("fixed"), "fixed");
    if (j.contains("discrepancy")) apply_discrepancy(j.at("discrepancy"), cfg.discrepancy);
  }

  if (j.contains("seed")) cfg.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("ground_truth")) {
    cfg.ground_truth = parse_parameter_map(j.at("ground_truth"), "ground_truth");
  }
  if (j.contains("observed_summary")) {
    cfg.observed_summary_path = j.at("observed_summary").get<std::string>();
    if (!j.contains("ground_truth")) cfg.ground_truth.clear();
  }
  if (j.contains("budgets")) apply_budgets(j.at("budgets"), cfg.budgets);
  if (j.contains("layout")) apply_layout(j.at("layout"), cfg.layout);
  if (j.contains("qlearning")) apply_qlearning(j.at("qlearning"), cfg.qlearning);
  if (j.contains("kernel")) apply_kernel(j.at("kernel"), cfg.kernel);
  if (j.contains("acquisition")) apply_acquisition(j.at("acquisition"), cfg.acquisition);
  if (j.contains("engine")) apply_engine(j.at("engine"), cfg);
  if (j.contains("rejection")) {
    require_keys(j.at("rejection"), "rejection", {"n_samples", "accept_quantile"});
    const auto& r = j.at("rejection");
    if (r.contains("n_samples")) cfg.reject_n_samples = r.at("n_samples").get<std::size_t>();
    if (r.contains("accept_quantile")) {
      cfg.reject_quantile = get_number(r, "rejection", "accept_quantile");
    }
  }

  cfg.acquisition.n_init = cfg.budgets.n_init;
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail("cannot open \"" + path + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace menuabc
