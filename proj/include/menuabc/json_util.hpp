#pragma once

#include <json.hpp>

#include "menuabc/gp.hpp"
#include "menuabc/summary.hpp"

namespace menuabc {

nlohmann::json summary_to_json(const BehaviorSummary& summary, int n_items = 8);
BehaviorSummary summary_from_json(const nlohmann::json& j);

// Inputs, targets and kernel constants; enough to resume a run by refitting.
nlohmann::json surrogate_to_json(const SurrogateModel& model);
SurrogateModel surrogate_from_json(const nlohmann::json& j);

}  // namespace menuabc
