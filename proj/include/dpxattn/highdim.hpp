#pragma once

#include <span>
#include <vector>

#include "dpxattn/distance.hpp"
#include "dpxattn/matrix.hpp"

namespace dpxattn {

/// d-dimensional weighted L1 (or coordinate-decomposed squared-L2) distance
/// queries: one DistanceIndex per coordinate, each built with the
/// advanced-composition budget (c.eps/sqrt(d ln(1/delta')), delta/d).
class HighDimIndex {
 public:
  HighDimIndex(const Matrix& points, std::span<const double> weights,
               double radius, double weight_bound, double epsilon, double delta,
               double delta_prime, double split_c, Rng& rng, DistanceMode mode,
               std::size_t grid_size = 0, bool noise_enabled = true);

  /// Sum of per-coordinate distance queries.
  double distance_query(std::span<const double> y, double alpha) const;

  /// Per-coordinate accounting summed across coordinates.
  ShellAccounting error_accounting(std::span<const double> y,
                                   double alpha) const;

  std::size_t dim() const { return coords_.size(); }
  double per_coordinate_epsilon() const { return per_coord_epsilon_; }
  double per_coordinate_delta() const { return per_coord_delta_; }
  const DistanceIndex& coordinate(std::size_t k) const { return coords_[k]; }

 private:
  double per_coord_epsilon_ = 0.0;
  double per_coord_delta_ = 0.0;
  std::vector<DistanceIndex> coords_;
};

}  // namespace dpxattn
