#pragma once

#include <string>
#include <vector>

#include "menuabc/rng.hpp"

namespace menuabc {

// A point theta in axis units. Length always equals the axis count of the
// space it belongs to.
using ParameterVector = std::vector<double>;

enum class PriorKind { kUniform, kTruncatedGaussian };

struct PriorSpec {
  PriorKind kind = PriorKind::kUniform;
  double mean = 0.0;  // truncated-gaussian only
  double std = 1.0;   // truncated-gaussian only
  double min = 0.0;
  double max = 1.0;

  static PriorSpec uniform(double min, double max);
  static PriorSpec truncated_gaussian(double mean, double std, double min, double max);

  // Exact sampling; the truncated gaussian rejects against the untruncated
  // normal, which is cheap for any reasonably wide truncation window.
  double sample(Rng& rng) const;

  // Log density, renormalized by the in-window mass. -inf outside [min, max].
  double log_density(double x) const;

  void validate() const;
};

struct ParameterAxis {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  PriorSpec prior;

  void validate() const;  // lower < upper and prior support within bounds
};

class ParameterSpace {
 public:
  ParameterSpace() = default;
  explicit ParameterSpace(std::vector<ParameterAxis> axes);

  std::size_t size() const { return axes_.size(); }
  bool empty() const { return axes_.empty(); }
  const ParameterAxis& axis(std::size_t i) const { return axes_.at(i); }
  const std::vector<ParameterAxis>& axes() const { return axes_; }

  ParameterVector sample_prior(Rng& rng) const;
  double log_prior_density(const ParameterVector& theta) const;

  // Affine bijection between axis units and [0,1]^d.
  ParameterVector to_unit_cube(const ParameterVector& theta) const;
  ParameterVector from_unit_cube(const ParameterVector& u) const;

  bool in_bounds(const ParameterVector& theta) const;

 private:
  std::vector<ParameterAxis> axes_;
};

}  // namespace menuabc
