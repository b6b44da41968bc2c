#include "dpxattn/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpxattn {

namespace {

constexpr double kBoundSlack = 1e-9;  // relative tolerance on domain checks

std::vector<double> build_histogram(std::span<const double> points,
                                    std::span<const double> weights,
                                    double radius, double weight_bound,
                                    std::size_t grid) {
  if (points.empty())
    throw std::invalid_argument("DistanceIndex: empty input");
  if (weights.size() != points.size())
    throw std::invalid_argument("DistanceIndex: points/weights length mismatch");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("DistanceIndex: radius must be positive");
  if (!(weight_bound > 0.0) || !std::isfinite(weight_bound))
    throw std::invalid_argument("DistanceIndex: weight_bound must be positive");
  std::vector<double> histogram(grid + 1, 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i];
    const double w = weights[i];
    if (!std::isfinite(x) || x < 0.0 || x > radius * (1.0 + kBoundSlack))
      throw std::invalid_argument("DistanceIndex: point outside [0, radius]");
    if (!std::isfinite(w) || std::abs(w) > weight_bound * (1.0 + kBoundSlack))
      throw std::invalid_argument(
          "DistanceIndex: weight outside [-weight_bound, weight_bound]");
    histogram[DistanceIndex::round_to_grid(std::min(x, radius), grid, radius)] +=
        w;
  }
  return histogram;
}

}  // namespace

DistanceIndex::DistanceIndex(std::span<const double> points,
                             std::span<const double> weights, double radius,
                             double weight_bound, double epsilon, double delta,
                             Rng& rng, DistanceMode mode, std::size_t grid_size,
                             bool noise_enabled)
    : radius_(radius),
      weight_bound_(weight_bound),
      grid_(grid_size == 0 ? points.size() : grid_size),
      mode_(mode),
      histogram_(build_histogram(points, weights, radius, weight_bound, grid_)),
      tree_(histogram_, 2.0 * weight_bound, epsilon, delta, rng,
            noise_enabled) {}

std::size_t DistanceIndex::round_to_grid(double x, std::size_t n,
                                         double radius) {
  if (!(x >= 0.0) || x > radius)
    throw std::invalid_argument("round_to_grid: x outside [0, radius]");
  const double step = radius / static_cast<double>(n);
  std::size_t j = static_cast<std::size_t>(std::floor(x / step));
  j = std::min(j, n - 1);
  // Midpoints round up, matching the <= comparison of the grid definition.
  if (std::abs(x - (j + 1) * step) <= std::abs(x - j * step)) ++j;
  return j;
}

double DistanceIndex::internal_alpha(double alpha) const {
  return mode_ == DistanceMode::kL2Squared ? alpha / 2.0 : alpha;
}

void DistanceIndex::validate_query(double y, double alpha) const {
  if (!std::isfinite(y) || y < 0.0 || y > radius_ * (1.0 + kBoundSlack))
    throw std::invalid_argument("DistanceIndex: query outside [0, radius]");
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("DistanceIndex: alpha must lie in (0, 1)");
}

std::vector<Shell> DistanceIndex::shells(double y, double alpha) const {
  validate_query(y, alpha);
  const double ratio = 1.0 + internal_alpha(alpha);
  const double step = radius_ / static_cast<double>(grid_);
  const std::size_t k = round_to_grid(std::min(y, radius_), grid_, radius_);
  const double y_snapped = static_cast<double>(k) * step;

  const auto round_clamped = [&](double t) {
    return round_to_grid(std::clamp(t, 0.0, radius_), grid_, radius_);
  };

  std::vector<Shell> out;
  double outer = radius_;
  while (true) {
    const double inner = outer / ratio;
    const double multiplier =
        mode_ == DistanceMode::kL2Squared ? outer * outer : outer;
    // Right of y: half-open bucket range (round(y+inner), round(y+outer)].
    {
      const std::size_t lo = round_clamped(y_snapped + inner);
      const std::size_t hi = round_clamped(y_snapped + outer);
      if (lo < hi) out.push_back(Shell{lo + 1, hi, multiplier});
    }
    // Left of y, mirrored: [round(y-outer), round(y-inner)).
    {
      const std::size_t lo = round_clamped(y_snapped - outer);
      const std::size_t hi = round_clamped(y_snapped - inner);
      if (lo < hi) out.push_back(Shell{lo, hi - 1, multiplier});
    }
    // Once the inner radius drops below half a grid step the remaining
    // buckets coincide with y's own bucket, which contributes distance 0.
    if (inner < 0.5 * step) break;
    outer = inner;
  }
  return out;
}

double DistanceIndex::distance_query(double y, double alpha) const {
  double value = 0.0;
  for (const Shell& s : shells(y, alpha))
    value += tree_.query(s.lo + 1, s.hi + 1).value * s.multiplier;
  return value;
}

double DistanceIndex::exact_rounded_distance(double y) const {
  if (!std::isfinite(y) || y < 0.0 || y > radius_ * (1.0 + kBoundSlack))
    throw std::invalid_argument("DistanceIndex: query outside [0, radius]");
  const double step = radius_ / static_cast<double>(grid_);
  const std::size_t k = round_to_grid(std::min(y, radius_), grid_, radius_);
  double value = 0.0;
  for (std::size_t j = 0; j <= grid_; ++j) {
    const double dist =
        step * static_cast<double>(j > k ? j - k : k - j);
    const double factor =
        mode_ == DistanceMode::kL2Squared ? dist * dist : dist;
    value += factor * histogram_[j];
  }
  return value;
}

ShellAccounting DistanceIndex::error_accounting(double y, double alpha) const {
  ShellAccounting acc;
  const double node_bound = tree_.node_spec().bound();
  const double node_variance = tree_.node_spec().variance();
  for (const Shell& s : shells(y, alpha)) {
    const auto nodes = tree_.decompose(s.lo + 1, s.hi + 1);
    acc.additive_bound += s.multiplier * node_bound * nodes.size();
    acc.noise_variance += s.multiplier * s.multiplier * node_variance *
                          static_cast<double>(nodes.size());
    acc.shell_count += 1;
    acc.node_count += static_cast<int>(nodes.size());
  }
  return acc;
}

}  // namespace dpxattn
