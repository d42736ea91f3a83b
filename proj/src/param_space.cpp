#include "menuabc/param_space.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "menuabc/stats.hpp"

namespace menuabc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxRejectionAttempts = 1000000;
}  // namespace

PriorSpec PriorSpec::uniform(double min, double max) {
  PriorSpec p;
  p.kind = PriorKind::kUniform;
  p.min = min;
  p.max = max;
  p.validate();
  return p;
}

PriorSpec PriorSpec::truncated_gaussian(double mean, double std, double min, double max) {
  PriorSpec p;
  p.kind = PriorKind::kTruncatedGaussian;
  p.mean = mean;
  p.std = std;
  p.min = min;
  p.max = max;
  p.validate();
  return p;
}

void PriorSpec::validate() const {
  if (!(min < max)) {
    throw std::invalid_argument("prior: min must be < max");
  }
  if (kind == PriorKind::kTruncatedGaussian && !(std > 0.0)) {
    throw std::invalid_argument("prior: truncated gaussian requires std > 0");
  }
}

double PriorSpec::sample(Rng& rng) const {
  if (kind == PriorKind::kUniform) {
    return std::uniform_real_distribution<double>(min, max)(rng);
  }
  std::normal_distribution<double> normal(mean, std);
  for (int i = 0; i < kMaxRejectionAttempts; ++i) {
    const double x = normal(rng);
    if (x >= min && x <= max) {
      return x;
    }
  }
  throw std::runtime_error("prior: rejection sampling exceeded attempt cap");
}

double PriorSpec::log_density(double x) const {
  if (x < min || x > max) {
    return kNegInf;
  }
  if (kind == PriorKind::kUniform) {
    return -std::log(max - min);
  }
  const double mass =
      normal_cdf((max - mean) / std) - normal_cdf((min - mean) / std);
  return normal_log_pdf(x, mean, std) - std::log(mass);
}

void ParameterAxis::validate() const {
  if (name.empty()) {
    throw std::invalid_argument("axis: empty name");
  }
  if (!(lower < upper)) {
    throw std::invalid_argument("axis '" + name + "': lower must be < upper");
  }
  prior.validate();
  if (prior.min < lower || prior.max > upper) {
    throw std::invalid_argument("axis '" + name +
                                "': prior support exceeds axis bounds");
  }
}

ParameterSpace::ParameterSpace(std::vector<ParameterAxis> axes) : axes_(std::move(axes)) {
  for (const auto& axis : axes_) {
    axis.validate();
  }
}

ParameterVector ParameterSpace::sample_prior(Rng& rng) const {
  if (axes_.empty()) {
    throw std::logic_error("sample_prior: empty parameter space");
  }
  ParameterVector theta;
  theta.reserve(axes_.size());
  for (const auto& axis : axes_) {
    theta.push_back(axis.prior.sample(rng));
  }
  return theta;
}

double ParameterSpace::log_prior_density(const ParameterVector& theta) const {
  if (theta.size() != axes_.size()) {
    throw std::invalid_argument("log_prior_density: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const double ld = axes_[i].prior.log_density(theta[i]);
    if (ld == kNegInf) {
      return kNegInf;
    }
    total += ld;
  }
  return total;
}

ParameterVector ParameterSpace::to_unit_cube(const ParameterVector& theta) const {
  if (theta.size() != axes_.size()) {
    throw std::invalid_argument("to_unit_cube: dimension mismatch");
  }
  ParameterVector u(theta.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto& axis = axes_[i];
    if (theta[i] < axis.lower || theta[i] > axis.upper) {
      throw std::out_of_range("to_unit_cube: '" + axis.name + "' out of bounds");
    }
    u[i] = (theta[i] - axis.lower) / (axis.upper - axis.lower);
  }
  return u;
}

ParameterVector ParameterSpace::from_unit_cube(const ParameterVector& u) const {
  if (u.size() != axes_.size()) {
    throw std::invalid_argument("from_unit_cube: dimension mismatch");
  }
  ParameterVector theta(u.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (u[i] < 0.0 || u[i] > 1.0) {
      throw std::out_of_range("from_unit_cube: coordinate outside [0,1]");
    }
    theta[i] = axes_[i].lower + u[i] * (axes_[i].upper - axes_[i].lower);
  }
  return theta;
}

bool ParameterSpace::in_bounds(const ParameterVector& theta) const {
  if (theta.size() != axes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (theta[i] < axes_[i].lower || theta[i] > axes_[i].upper) {
      return false;
    }
  }
  return true;
}

}  // namespace menuabc
