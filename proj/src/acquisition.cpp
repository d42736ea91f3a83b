#include "menuabc/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "menuabc/sobol.hpp"

namespace menuabc {

void AcquisitionConfig::validate() const {
  if (lcb_multiplier < 0.0) throw std::invalid_argument("lcb multiplier must be >= 0");
  if (!(repulsion_amplitude > 0.0) || !(repulsion_scale > 0.0)) {
    throw std::invalid_argument("repulsion amplitude and scale must be > 0");
  }
  if (prior_draw_prob < 0.0 || prior_draw_prob > 1.0) {
    throw std::invalid_argument("prior_draw_prob must be in [0,1]");
  }
  if (n_candidates < 1) throw std::invalid_argument("n_candidates must be >= 1");
  if (refine_steps < 0) throw std::invalid_argument("refine_steps must be >= 0");
}

void PendingSet::add(std::vector<double> point) {
  locations_.push_back(std::move(point));
}

void PendingSet::remove(const std::vector<double>& point) {
  const auto it = std::find(locations_.begin(), locations_.end(), point);
  if (it != locations_.end()) {
    locations_.erase(it);
  }
}

double lcb(const SurrogateModel& model, std::span<const double> x, double b) {
  const auto [mean, variance] = model.predict(x);
  return mean - b * std::sqrt(variance);
}

double repulsion(const PendingSet& pending, std::span<const double> x,
                 double amplitude, double scale) {
  double total = 0.0;
  for (const auto& p : pending.locations()) {
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - p[i];
      sq += d * d;
    }
    total += amplitude * std::exp(-sq / scale);
  }
  return total;
}

const char* to_string(AcquisitionOrigin origin) {
  switch (origin) {
    case AcquisitionOrigin::kSobol: return "sobol";
    case AcquisitionOrigin::kAcquisition: return "acquisition";
    case AcquisitionOrigin::kPriorDraw: return "prior-draw";
  }
  return "acquisition";
}

AcquisitionChoice next_location(const SurrogateModel& model, const PendingSet& pending,
                                const ParameterSpace& space, const AcquisitionConfig& cfg,
                                Rng& rng) {
  cfg.validate();
  const std::size_t dims = space.size();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (model.n_points() == 0 || unit(rng) < cfg.prior_draw_prob) {
    return {space.to_unit_cube(space.sample_prior(rng)), AcquisitionOrigin::kPriorDraw};
  }

  const auto objective = [&](const std::vector<double>& x) {
    return lcb(model, x, cfg.lcb_multiplier) +
           repulsion(pending, x, cfg.repulsion_amplitude, cfg.repulsion_scale);
  };

  // Shifted Sobol candidates (Cranley-Patterson rotation).
  std::vector<double> shift(dims);
  for (auto& s : shift) s = unit(rng);
  SobolSequence seq(dims);
  std::vector<double> best;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cfg.n_candidates; ++i) {
    std::vector<double> candidate = seq.next();
    for (std::size_t d = 0; d < dims; ++d) {
      candidate[d] = std::fmod(candidate[d] + shift[d], 1.0);
    }
    const double value = objective(candidate);
    if (value < best_value) {
      best_value = value;
      best = std::move(candidate);
    }
  }

  // Coordinate descent around the best candidate; the step halves whenever a
  // full sweep fails to improve.
  double step = 0.125;
  for (int sweep = 0; sweep < cfg.refine_steps && step > 1e-6; ++sweep) {
    bool improved = false;
    for (std::size_t d = 0; d < dims; ++d) {
      for (const double direction : {-1.0, 1.0}) {
        std::vector<double> trial = best;
        trial[d] = std::clamp(trial[d] + direction * step, 0.0, 1.0);
        const double value = objective(trial);
        if (value < best_value) {
          best_value = value;
          best = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
    }
  }
  return {std::move(best), AcquisitionOrigin::kAcquisition};
}

}  // namespace menuabc
