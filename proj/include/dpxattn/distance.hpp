#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dpxattn/dptree.hpp"

namespace dpxattn {

enum class DistanceMode { kL1, kL2Squared };

/// One geometric shell of a distance query: histogram buckets in the
/// inclusive range [lo, hi], all charged the same distance multiplier.
struct Shell {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double multiplier = 0.0;
};

/// Deterministic error accounting for one query: the worst-case additive
/// noise bound (from the bounded TLap support) and the exact noise variance
/// accumulated over the canonical tree nodes the query touches.
struct ShellAccounting {
  double additive_bound = 0.0;
  double noise_variance = 0.0;
  int shell_count = 0;
  int node_count = 0;
};

/// Weighted L1 / squared-L2 distance queries over [0, radius] via a rounded
/// weight histogram and geometrically spaced interval queries against a
/// DPTree with sensitivity 2 * weight_bound.
///
/// Immutable after construction; queries touch only the frozen tree.
class DistanceIndex {
 public:
  /// grid_size 0 means "one bucket step per point" (grid = points.size()).
  DistanceIndex(std::span<const double> points, std::span<const double> weights,
                double radius, double weight_bound, double epsilon,
                double delta, Rng& rng, DistanceMode mode,
                std::size_t grid_size = 0, bool noise_enabled = true);

  /// Nearest grid index of x on the (n+1)-point grid {0, R/n, ..., R};
  /// midpoints round up.
  static std::size_t round_to_grid(double x, std::size_t n, double radius);

  /// Noisy estimate of sum_i w_i |y - x_i| (L1) or sum_i w_i (y - x_i)^2
  /// (L2 squared). One-sided shell multipliers overestimate each rounded
  /// distance by at most a (1 + alpha) factor.
  double distance_query(double y, double alpha) const;

  /// Noise-free non-geometric reference: per-bucket rounded distances times
  /// histogram weights. Isolates bucketing error from shell and noise error.
  double exact_rounded_distance(double y) const;

  /// Shell decomposition used for (y, alpha); exposed for disjointness tests
  /// and error accounting.
  std::vector<Shell> shells(double y, double alpha) const;

  ShellAccounting error_accounting(double y, double alpha) const;

  double radius() const { return radius_; }
  double weight_bound() const { return weight_bound_; }
  std::size_t grid_size() const { return grid_; }
  DistanceMode mode() const { return mode_; }
  /// Geometric ratio parameter actually used (alpha/2 in L2 squared mode).
  double internal_alpha(double alpha) const;
  const std::vector<double>& histogram() const { return histogram_; }
  const DPTree& tree() const { return tree_; }

 private:
  void validate_query(double y, double alpha) const;

  double radius_;
  double weight_bound_;
  std::size_t grid_;
  DistanceMode mode_;
  std::vector<double> histogram_;
  DPTree tree_;
};

}  // namespace dpxattn
