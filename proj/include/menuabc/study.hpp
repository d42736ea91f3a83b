#pragma once

#include <string>

#include "menuabc/config.hpp"
#include "menuabc/inference.hpp"

namespace menuabc {

// Composes the full model parameter set from the fixed values and the
// inferred coordinates of theta.
ModelParameters make_model_params(const RunConfig& cfg, const ParameterVector& theta);

// The evaluation contract handed to the inference engine: train a policy at
// theta with the seeded random source, roll out sessions, summarize.
Simulator make_simulator(const RunConfig& cfg);

// Synthetic observed data at the configured ground truth, or the observed
// summary loaded from file.
BehaviorSummary make_observed(const RunConfig& cfg);

// Subcommand drivers; each writes its artifacts under cfg.out_dir and
// returns a process exit status.
int run_simulate(const RunConfig& cfg);
int run_infer(const RunConfig& cfg);
int run_reject(const RunConfig& cfg);
int run_report(const std::string& out_dir);

// Predicted-vs-observed table with error magnitudes (TCT in 100 ms units,
// fixation counts in counts) plus normalized histogram rows.
void write_report_csv(std::ostream& out, const BehaviorSummary& observed,
                      const BehaviorSummary& predicted);

}  // namespace menuabc
