#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "menuabc/acquisition.hpp"
#include "menuabc/discrepancy.hpp"
#include "menuabc/gp.hpp"
#include "menuabc/param_space.hpp"
#include "menuabc/summary.hpp"

namespace menuabc {

// The simulator must be deterministic given (theta, seed).
using Simulator = std::function<BehaviorSummary(const ParameterVector&, std::uint64_t)>;

struct InferenceProblem {
  ParameterSpace space;
  Simulator simulator;
  BehaviorSummary observed;
  DiscrepancyConfig discrepancy;
};

enum class EpsilonRule { kMinGpMean, kMinObserved };

struct EngineConfig {
  std::size_t total_budget = 40;  // simulator evaluations, including the init phase
  std::size_t workers = 1;        // concurrent in-flight evaluations
  std::size_t refit_every = 1;    // GP refit batch size, in completions
  AcquisitionConfig acquisition;
  KernelConfig kernel;
  EpsilonRule epsilon_rule = EpsilonRule::kMinGpMean;
  bool standardize_discrepancies = true;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct EvaluatedSample {
  ParameterVector theta;
  std::vector<double> unit_point;
  double discrepancy = 0.0;  // NaN when the evaluation failed
  std::uint64_t seed = 0;
  AcquisitionOrigin origin = AcquisitionOrigin::kSobol;
  double wall_time_s = 0.0;
  bool ok = false;
  std::string error;
};

// Unnormalized ABC posterior built from the fitted surrogate:
// prior(theta) * Phi((epsilon - mu(u)) / sqrt(var(u) + noise)).
class PosteriorApprox {
 public:
  PosteriorApprox() = default;
  PosteriorApprox(SurrogateModel model, ParameterSpace space, double epsilon);

  double log_unnormalized_density(std::span<const double> unit_point) const;
  double epsilon() const { return epsilon_; }
  const ParameterVector& map() const { return map_; }
  void set_map(ParameterVector map) { map_ = std::move(map); }
  const ParameterSpace& space() const { return space_; }
  const SurrogateModel& model() const { return model_; }

 private:
  SurrogateModel model_;
  ParameterSpace space_;
  double epsilon_ = 0.0;
  ParameterVector map_;
};

struct InferenceDiagnostics {
  std::size_t n_success = 0;
  std::size_t n_failed = 0;
  double epsilon = 0.0;
  double best_discrepancy = 0.0;
  ParameterVector best_theta;
  double total_wall_s = 0.0;
};

struct InferenceResult {
  std::vector<EvaluatedSample> samples;
  SurrogateModel model;
  PosteriorApprox posterior;
  InferenceDiagnostics diagnostics;
};

// The BOLFI loop: Sobol initialization, then acquisition-driven sampling up
// to the budget, with the surrogate refit after every incorporated batch.
// Failed simulator calls are logged and skipped; at least one evaluation
// must succeed.
InferenceResult run_inference(const InferenceProblem& problem, const EngineConfig& cfg);

// Builds the posterior, including its MAP estimate. epsilon is the minimum
// GP posterior mean over the training inputs (or the minimum observed
// discrepancy, by rule).
PosteriorApprox extract_posterior(const SurrogateModel& model, const ParameterSpace& space,
                                  EpsilonRule rule);

// Argmax of the posterior log density: dense grid for one or two axes,
// multi-start refinement above that. Returned in axis units.
ParameterVector map_estimate(const PosteriorApprox& posterior, const ParameterSpace& space);

struct RejectionSample {
  ParameterVector theta;
  double discrepancy = 0.0;
  std::uint64_t seed = 0;
  bool accepted = false;
};

std::vector<RejectionSample> rejection_abc_detailed(const InferenceProblem& problem,
                                                    std::size_t n_samples,
                                                    double accept_quantile, Rng& rng);

// Prior draws filtered to the lowest-discrepancy quantile.
std::vector<ParameterVector> rejection_abc(const InferenceProblem& problem,
                                           std::size_t n_samples, double accept_quantile,
                                           Rng& rng);

// Posterior mean by tensor-grid quadrature; supports up to three axes.
ParameterVector posterior_mean(const PosteriorApprox& posterior, const ParameterSpace& space,
                               std::size_t grid_per_dim = 512);

}  // namespace menuabc
