#pragma once

#include <span>
#include <vector>

#include "menuabc/gp.hpp"
#include "menuabc/param_space.hpp"
#include "menuabc/rng.hpp"

namespace menuabc {

struct AcquisitionConfig {
  double lcb_multiplier = 1.0;        // b in LCB(x) = mu(x) - b * sigma(x)
  double repulsion_amplitude = 0.04;  // a in R(x) = sum a*exp(-|x-p|^2/l)
  double repulsion_scale = 0.04;      // l
  double prior_draw_prob = 0.1;
  std::size_t n_init = 8;  // Sobol initialization count

  // Acquisition optimizer: shifted low-discrepancy candidates followed by
  // coordinate-descent refinement.
  std::size_t n_candidates = 1024;
  int refine_steps = 50;

  void validate() const;
};

// Unit-cube locations whose simulations are still in flight.
class PendingSet {
 public:
  void add(std::vector<double> point);
  void remove(const std::vector<double>& point);
  bool empty() const { return locations_.empty(); }
  std::size_t size() const { return locations_.size(); }
  const std::vector<std::vector<double>>& locations() const { return locations_; }

 private:
  std::vector<std::vector<double>> locations_;
};

double lcb(const SurrogateModel& model, std::span<const double> x, double b);

double repulsion(const PendingSet& pending, std::span<const double> x,
                 double amplitude, double scale);

enum class AcquisitionOrigin { kSobol, kAcquisition, kPriorDraw };

const char* to_string(AcquisitionOrigin origin);

struct AcquisitionChoice {
  std::vector<double> unit_point;
  AcquisitionOrigin origin;
};

// Chooses where to simulate next: a prior draw with probability
// prior_draw_prob (and always when the model has no data), otherwise the
// approximate minimizer of LCB + repulsion.
AcquisitionChoice next_location(const SurrogateModel& model, const PendingSet& pending,
                                const ParameterSpace& space, const AcquisitionConfig& cfg,
                                Rng& rng);

}  // namespace menuabc
