#include "menuabc/gp.hpp"

#include <cmath>
#include <stdexcept>

namespace menuabc {

void KernelConfig::validate() const {
  if (!(variance > 0.0) || !(lengthscale > 0.0) || !(noise_variance > 0.0)) {
    throw std::invalid_argument("kernel: variance, lengthscale, noise must be > 0");
  }
}

namespace {

double matern32_r(double r, const KernelConfig& cfg) {
  const double s = std::sqrt(3.0) * r / cfg.lengthscale;
  return cfg.variance * (1.0 + s) * std::exp(-s);
}

double distance(std::span<const double> x, std::span<const double> y) {
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace

double matern32(std::span<const double> x, std::span<const double> y,
                const KernelConfig& cfg) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("matern32: dimension mismatch");
  }
  return matern32_r(distance(x, y), cfg);
}

SurrogateModel SurrogateModel::fit(std::vector<std::vector<double>> points,
                                   std::vector<double> targets, const KernelConfig& cfg,
                                   MeanPolicy mean_policy) {
  cfg.validate();
  if (points.size() != targets.size()) {
    throw std::invalid_argument("fit: point/target count mismatch");
  }
  for (double t : targets) {
    if (!std::isfinite(t)) {
      throw std::invalid_argument("fit: non-finite target");
    }
  }
  const std::size_t dim = points.empty() ? 0 : points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) {
      throw std::invalid_argument("fit: inconsistent point dimensions");
    }
  }

  SurrogateModel model;
  model.cfg_ = cfg;
  model.mean_policy_ = mean_policy;
  model.inputs_ = std::move(points);
  model.targets_ = std::move(targets);

  const auto n = static_cast<Eigen::Index>(model.inputs_.size());
  if (n == 0) {
    return model;
  }

  if (mean_policy == MeanPolicy::kSampleMean) {
    double sum = 0.0;
    for (double t : model.targets_) sum += t;
    model.mean_offset_ = sum / static_cast<double>(n);
  }

  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = cfg.variance + cfg.noise_variance;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k = matern32_r(distance(model.inputs_[i], model.inputs_[j]), cfg);
      K(i, j) = k;
      K(j, i) = k;
    }
  }

  model.llt_.compute(K);
  if (model.llt_.info() != Eigen::Success) {
    throw std::runtime_error("fit: kernel matrix factorization failed");
  }
  Eigen::VectorXd residual(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    residual(i) = model.targets_[i] - model.mean_offset_;
  }
  model.weights_ = model.llt_.solve(residual);
  return model;
}

std::pair<double, double> SurrogateModel::predict(std::span<const double> x) const {
  if (inputs_.empty()) {
    return {mean_offset_, cfg_.variance};
  }
  if (x.size() != inputs_.front().size()) {
    throw std::invalid_argument("predict: dimension mismatch");
  }
  const auto n = static_cast<Eigen::Index>(inputs_.size());
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k_star(i) = matern32_r(distance(x, inputs_[i]), cfg_);
  }
  const double mean = mean_offset_ + k_star.dot(weights_);
  const Eigen::VectorXd v = llt_.solve(k_star);
  double variance = cfg_.variance - k_star.dot(v);
  if (variance < 0.0) {
    variance = 0.0;
  }
  return {mean, variance};
}

}  // namespace menuabc
