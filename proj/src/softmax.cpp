#include "dpxattn/softmax.hpp"

#include <cmath>
#include <stdexcept>

namespace dpxattn {

namespace {

void validate_config(const SoftmaxIndex::Config& config) {
  if (!(config.split_c > 0.0) || config.split_c >= 0.1)
    throw std::invalid_argument("SoftmaxIndex: split constant must lie in (0, 0.1)");
  if (!(config.delta_prime > 0.0) || config.delta_prime >= 1.0)
    throw std::invalid_argument("SoftmaxIndex: delta_prime must lie in (0, 1)");
}

}  // namespace

SoftmaxIndex::SoftmaxIndex(const Matrix& points, std::span<const double> weights,
                           double radius, double weight_bound,
                           const Config& config, Rng& rng)
    : config_(config),
      radius_(radius),
      weight_bound_(weight_bound),
      kernel_((validate_config(config),
               select_params(points.cols, radius, config.epsilon_s,
                             config.feature_cap))) {
  build(points, weights, rng);
}

SoftmaxIndex::SoftmaxIndex(const Matrix& points, std::span<const double> weights,
                           double radius, double weight_bound,
                           const Config& config, Rng& rng,
                           const KernelParams& kernel)
    : config_(config), radius_(radius), weight_bound_(weight_bound),
      kernel_((validate_config(config), kernel)) {
  build(points, weights, rng);
}

void SoftmaxIndex::build(const Matrix& points, std::span<const double> weights,
                         Rng& rng) {
  if (points.rows == 0)
    throw std::invalid_argument("SoftmaxIndex: empty point matrix");
  if (weights.size() != points.rows)
    throw std::invalid_argument("SoftmaxIndex: weights/rows mismatch");
  n_ = points.rows;

  features_ = feature_matrix(kernel_, points);
  for (std::size_t j = 0; j < n_; ++j) {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < kernel_.feature_count; ++i) {
      const double v = features_.at(j, i);
      norm_sq += v * v;
    }
    p_wx_ += weights[j] * norm_sq;
    s_w_ += weights[j];
  }

  const double r = static_cast<double>(kernel_.feature_count);
  double tree_epsilon = config_.epsilon;
  double tree_delta = config_.delta;
  if (config_.noisy_scalars) {
    // Half the budget goes to the two scalar releases, half to the trees.
    tree_epsilon *= 0.5;
    tree_delta *= 0.5;
    const double scalar_epsilon = 0.25 * config_.epsilon;
    const double scalar_delta = 0.25 * config_.delta;
    double max_norm_sq = 0.0;
    for (std::size_t i = 0; i < kernel_.feature_count; ++i)
      max_norm_sq += kernel_.coordinate_max[i] * kernel_.coordinate_max[i];
    Rng scalar_rng = rng.split(0x5ca1a5ULL);
    const NoiseSpec p_wx_spec(2.0 * weight_bound_ * max_norm_sq, scalar_epsilon,
                              scalar_delta);
    const NoiseSpec s_w_spec(2.0 * weight_bound_, scalar_epsilon, scalar_delta);
    if (config_.noise_enabled) {
      p_wx_ += sample_truncated_laplace(p_wx_spec, scalar_rng);
      s_w_ += sample_truncated_laplace(s_w_spec, scalar_rng);
    }
  }
  per_coord_epsilon_ = config_.split_c * tree_epsilon /
                       std::sqrt(r * std::log(1.0 / config_.delta_prime));
  per_coord_delta_ = tree_delta / r;

  coords_.reserve(kernel_.feature_count);
  for (std::size_t i = 0; i < kernel_.feature_count; ++i) {
    Rng child = rng.split(i + 1);
    coords_.emplace_back(features_.column(i), weights, kernel_.coordinate_max[i],
                         weight_bound_, per_coord_epsilon_, per_coord_delta_,
                         child, DistanceMode::kL2Squared, n_,
                         config_.noise_enabled);
  }
}

double SoftmaxIndex::query(std::span<const double> y, double alpha) const {
  const auto py = feature_map(kernel_, y);
  double py_norm_sq = 0.0;
  for (double v : py) py_norm_sq += v * v;
  double distance_sum = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    // Feature values can exceed the analytic coordinate max by rounding ulps.
    const double yi = std::min(py[i], coords_[i].radius());
    distance_sum += coords_[i].distance_query(yi, alpha);
  }
  return 0.5 * (p_wx_ + s_w_ * py_norm_sq - distance_sum);
}

ShellAccounting SoftmaxIndex::error_accounting(std::span<const double> y,
                                               double alpha) const {
  const auto py = feature_map(kernel_, y);
  ShellAccounting total;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const double yi = std::min(py[i], coords_[i].radius());
    const ShellAccounting acc = coords_[i].error_accounting(yi, alpha);
    total.additive_bound += 0.5 * acc.additive_bound;
    total.noise_variance += 0.25 * acc.noise_variance;
    total.shell_count += acc.shell_count;
    total.node_count += acc.node_count;
  }
  return total;
}

}  // namespace dpxattn
