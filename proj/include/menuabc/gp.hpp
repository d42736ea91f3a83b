#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace menuabc {

struct KernelConfig {
  double variance = 0.01;
  double lengthscale = 0.1;
  double noise_variance = 0.05;

  void validate() const;
};

// Mean handling for the GP on discrepancies. kSampleMean subtracts the mean
// of the observed targets before fitting and adds it back on predict.
enum class MeanPolicy { kZero, kSampleMean };

double matern32(std::span<const double> x, std::span<const double> y,
                const KernelConfig& cfg);

// Gaussian-process regression with a Matern-3/2 kernel and fixed
// hyperparameters. Fitting factorizes K + noise*I once; a fitted model is
// immutable and safe for concurrent predict calls.
class SurrogateModel {
 public:
  SurrogateModel() = default;

  static SurrogateModel fit(std::vector<std::vector<double>> points,
                            std::vector<double> targets, const KernelConfig& cfg,
                            MeanPolicy mean_policy = MeanPolicy::kZero);

  // Posterior (mean, variance) at x; variance excludes observation noise and
  // is clamped at zero. With no training data this is the prior
  // (mean_offset, variance).
  std::pair<double, double> predict(std::span<const double> x) const;

  std::size_t n_points() const { return inputs_.size(); }
  const std::vector<std::vector<double>>& inputs() const { return inputs_; }
  const std::vector<double>& targets() const { return targets_; }
  const KernelConfig& config() const { return cfg_; }
  MeanPolicy mean_policy() const { return mean_policy_; }
  double mean_offset() const { return mean_offset_; }

 private:
  std::vector<std::vector<double>> inputs_;
  std::vector<double> targets_;
  KernelConfig cfg_;
  MeanPolicy mean_policy_ = MeanPolicy::kZero;
  double mean_offset_ = 0.0;
  Eigen::VectorXd weights_;       // (K + noise I)^-1 (y - offset)
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

}  // namespace menuabc
