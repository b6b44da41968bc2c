#include "dpxattn/highdim.hpp"

#include <cmath>
#include <stdexcept>

namespace dpxattn {

HighDimIndex::HighDimIndex(const Matrix& points, std::span<const double> weights,
                           double radius, double weight_bound, double epsilon,
                           double delta, double delta_prime, double split_c,
                           Rng& rng, DistanceMode mode, std::size_t grid_size,
                           bool noise_enabled) {
  if (points.rows == 0 || points.cols == 0)
    throw std::invalid_argument("HighDimIndex: empty point matrix");
  if (weights.size() != points.rows)
    throw std::invalid_argument("HighDimIndex: weights/rows mismatch");
  if (!(delta_prime > 0.0) || delta_prime >= 1.0)
    throw std::invalid_argument("HighDimIndex: delta_prime must lie in (0,1)");
  if (!(split_c > 0.0) || split_c >= 0.1)
    throw std::invalid_argument("HighDimIndex: split constant must lie in (0, 0.1)");
  // Advanced composition needs epsilon <= ln(1/delta'); larger budgets void
  // the stated DP constant.
  if (epsilon > std::log(1.0 / delta_prime))
    throw std::invalid_argument("HighDimIndex: requires epsilon <= ln(1/delta_prime)");

  const double d = static_cast<double>(points.cols);
  per_coord_epsilon_ =
      split_c * epsilon / std::sqrt(d * std::log(1.0 / delta_prime));
  per_coord_delta_ = delta / d;

  coords_.reserve(points.cols);
  for (std::size_t k = 0; k < points.cols; ++k) {
    Rng child = rng.split(k);
    coords_.emplace_back(points.column(k), weights, radius, weight_bound,
                         per_coord_epsilon_, per_coord_delta_, child, mode,
                         grid_size, noise_enabled);
  }
}

double HighDimIndex::distance_query(std::span<const double> y,
                                    double alpha) const {
  if (y.size() != coords_.size())
    throw std::invalid_argument("HighDimIndex: query dimension mismatch");
  double value = 0.0;
  for (std::size_t k = 0; k < coords_.size(); ++k)
    value += coords_[k].distance_query(y[k], alpha);
  return value;
}

ShellAccounting HighDimIndex::error_accounting(std::span<const double> y,
                                               double alpha) const {
  if (y.size() != coords_.size())
    throw std::invalid_argument("HighDimIndex: query dimension mismatch");
  ShellAccounting total;
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    const ShellAccounting acc = coords_[k].error_accounting(y[k], alpha);
    total.additive_bound += acc.additive_bound;
    total.noise_variance += acc.noise_variance;
    total.shell_count += acc.shell_count;
    total.node_count += acc.node_count;
  }
  return total;
}

}  // namespace dpxattn
