#include "dpxattn/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dpxattn {

namespace {

void enumerate_degree(std::size_t dim, int total, std::vector<int>& current,
                      std::size_t coord, std::vector<std::vector<int>>& out) {
  if (coord + 1 == dim) {
    current[coord] = total;
    out.push_back(current);
    return;
  }
  // Largest exponent on the earliest coordinate first (graded-lex).
  for (int e = total; e >= 0; --e) {
    current[coord] = e;
    enumerate_degree(dim, total - e, current, coord + 1, out);
  }
}

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  long double value = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    value = value * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (value > 4.0L * static_cast<long double>(cap))
      return 4 * cap;  // saturate; caller only compares against cap
  }
  return static_cast<std::size_t>(std::llroundl(value));
}

}  // namespace

double taylor_tail(double radius, int degree) {
  const double u = radius * radius;
  double term = 1.0;
  for (int j = 1; j <= degree; ++j) term *= u / j;
  // term now holds u^degree / degree!
  double tail = 0.0;
  int j = degree;
  while (true) {
    ++j;
    term *= u / j;
    tail += term;
    if (term < 1e-300) break;
    if (j >= degree + 64 && u / (j + 1) < 0.5) {
      // Remaining terms are dominated by a geometric series with ratio < 1/2.
      const double q = u / (j + 1);
      tail += term * q / (1.0 - q);
      break;
    }
  }
  return tail;
}

std::vector<std::vector<int>> enumerate_multi_indices(std::size_t dim,
                                                      int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(dim, 0);
  for (int total = 0; total <= degree; ++total)
    enumerate_degree(dim, total, current, 0, out);
  return out;
}

KernelParams select_params(std::size_t dim, double radius, double epsilon_s,
                           std::size_t feature_cap) {
  if (dim == 0) throw std::invalid_argument("select_params: dim must be >= 1");
  if (!(radius >= 1.0) || !std::isfinite(radius))
    throw std::invalid_argument("select_params: radius must be >= 1");
  if (!(epsilon_s > 0.0) || epsilon_s >= 0.1)
    throw std::invalid_argument("select_params: epsilon_s must lie in (0, 0.1)");

  int degree = 0;
  while (taylor_tail(radius, degree) > epsilon_s) ++degree;

  const std::size_t r =
      binomial_capped(static_cast<std::size_t>(degree) + dim, dim, feature_cap);
  if (r > feature_cap)
    throw InfeasibleError(
        "select_params: feature count exceeds cap for this (dim, degree)");

  KernelParams params;
  params.dim = dim;
  params.radius = radius;
  params.epsilon_s = epsilon_s;
  params.degree = degree;

  const auto indices = enumerate_multi_indices(dim, degree);
  params.feature_count = indices.size();
  params.exponents.reserve(indices.size() * dim);
  for (const auto& beta : indices)
    params.exponents.insert(params.exponents.end(), beta.begin(), beta.end());

  params.gamma = 1.0;
  double power = 1.0;
  double factorial = 1.0;
  for (int j = 1; j <= degree; ++j) {
    power *= radius;
    factorial *= j;
    params.gamma = std::max(params.gamma, power / std::sqrt(factorial));
  }

  std::map<std::vector<int>, std::size_t> position;
  for (std::size_t i = 0; i < indices.size(); ++i) position[indices[i]] = i;

  params.parent.assign(indices.size(), 0);
  params.parent_coord.assign(indices.size(), 0);
  params.step_scale.assign(indices.size(), 1.0);
  params.coordinate_max.assign(indices.size(), 1.0);
  const double scaled_radius = radius / std::sqrt(static_cast<double>(dim));
  for (std::size_t i = 1; i < indices.size(); ++i) {
    std::vector<int> beta = indices[i];
    std::size_t k = 0;
    while (beta[k] == 0) ++k;
    const int bk = beta[k];
    beta[k] -= 1;
    params.parent[i] = position.at(beta);
    params.parent_coord[i] = static_cast<int>(k);
    params.step_scale[i] = 1.0 / std::sqrt(static_cast<double>(bk));
    params.coordinate_max[i] = params.coordinate_max[params.parent[i]] *
                               scaled_radius * params.step_scale[i];
  }
  return params;
}

void feature_map(const KernelParams& params, std::span<const double> x,
                 std::span<double> out) {
  if (x.size() != params.dim)
    throw std::invalid_argument("feature_map: input dimension mismatch");
  if (out.size() != params.feature_count)
    throw std::invalid_argument("feature_map: output length mismatch");
  constexpr double kSlack = 1e-9;
  for (double v : x)
    if (!std::isfinite(v) || v < 0.0 || v > params.radius * (1.0 + kSlack))
      throw std::invalid_argument("feature_map: input outside [0, radius]^d");

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(params.dim));
  out[0] = 1.0;
  for (std::size_t i = 1; i < params.feature_count; ++i)
    out[i] = out[params.parent[i]] * x[params.parent_coord[i]] * inv_sqrt_d *
             params.step_scale[i];
}

std::vector<double> feature_map(const KernelParams& params,
                                std::span<const double> x) {
  std::vector<double> out(params.feature_count);
  feature_map(params, x, out);
  return out;
}

Matrix feature_matrix(const KernelParams& params, const Matrix& points) {
  if (points.cols != params.dim)
    throw std::invalid_argument("feature_matrix: point dimension mismatch");
  Matrix features(points.rows, params.feature_count);
  for (std::size_t i = 0; i < points.rows; ++i)
    feature_map(params, points.row(i),
                std::span<double>(features.data.data() +
                                      i * params.feature_count,
                                  params.feature_count));
  return features;
}

double kernel_error(const KernelParams& params, std::span<const double> x,
                    std::span<const double> y) {
  const auto px = feature_map(params, x);
  const auto py = feature_map(params, y);
  double dot_features = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) dot_features += px[i] * py[i];
  double dot_inputs = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) dot_inputs += x[k] * y[k];
  return std::abs(dot_features -
                  std::exp(dot_inputs / static_cast<double>(params.dim)));
}

}  // namespace dpxattn
