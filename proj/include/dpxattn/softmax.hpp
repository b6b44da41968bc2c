#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dpxattn/distance.hpp"
#include "dpxattn/kernel.hpp"
#include "dpxattn/matrix.hpp"

namespace dpxattn {

/// DP weighted softmax query w^T exp(Xy/d): exact norm scalars plus one
/// squared-L2 DistanceIndex per kernel coordinate. Coordinate i lives on
/// [0, G_i] where G_i is the analytic max of that kernel feature, with the
/// per-coordinate budget (c.eps/sqrt(r ln(1/delta')), delta/r).
///
/// The scalars P_wx = sum_i w_i ||P(x_i)||^2 and s_w = sum_i w_i are stored
/// exactly by default. They depend on the private data and are released only
/// through the post-processed query value; noisy_scalars adds truncated
/// Laplace noise to both for a self-evidently private release, halving the
/// tree budget.
class SoftmaxIndex {
 public:
  struct Config {
    double epsilon = 0.5;
    double delta = 0.01;
    double delta_prime = 0.01;
    double split_c = 0.05;
    double epsilon_s = 0.05;
    std::size_t feature_cap = 1'000'000;
    bool noise_enabled = true;
    bool noisy_scalars = false;
  };

  SoftmaxIndex(const Matrix& points, std::span<const double> weights,
               double radius, double weight_bound, const Config& config,
               Rng& rng);

  /// Shared kernel parameters variant, so adaptive copies and attention
  /// columns reuse one selection.
  SoftmaxIndex(const Matrix& points, std::span<const double> weights,
               double radius, double weight_bound, const Config& config,
               Rng& rng, const KernelParams& kernel);

  /// 0.5 (P_wx + s_w ||P(y)||^2 - sum_i coord_i.distance_query(P(y)_i)).
  double query(std::span<const double> y, double alpha) const;

  /// Deterministic bound and variance of the noise entering one query
  /// (the 0.5-scaled accumulation over all kernel coordinates).
  ShellAccounting error_accounting(std::span<const double> y,
                                   double alpha) const;

  const KernelParams& kernel() const { return kernel_; }
  double weighted_feature_norm() const { return p_wx_; }
  double weight_sum() const { return s_w_; }
  double per_coordinate_epsilon() const { return per_coord_epsilon_; }
  double per_coordinate_delta() const { return per_coord_delta_; }
  const Matrix& features() const { return features_; }
  const DistanceIndex& coordinate(std::size_t i) const { return coords_[i]; }
  std::size_t point_count() const { return n_; }
  const Config& config() const { return config_; }

 private:
  void build(const Matrix& points, std::span<const double> weights, Rng& rng);

  Config config_;
  double radius_;
  double weight_bound_;
  std::size_t n_ = 0;
  KernelParams kernel_;
  Matrix features_;
  double p_wx_ = 0.0;
  double s_w_ = 0.0;
  double per_coord_epsilon_ = 0.0;
  double per_coord_delta_ = 0.0;
  std::vector<DistanceIndex> coords_;
};

}  // namespace dpxattn
