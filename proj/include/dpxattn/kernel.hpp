#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "dpxattn/matrix.hpp"

namespace dpxattn {

/// Raised when requested parameters cannot be realized (feature count over
/// the cap, per-copy budget underflow). Distinct from plain validation errors
/// so callers can report "infeasible" separately from "invalid".
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Degree-s monomial feature map on [0, radius]^d whose inner products equal
/// the degree-s truncated Taylor series of exp(<x,y>/d). The entry for a
/// multi-index b is prod_k (x_k/sqrt(d))^{b_k} / sqrt(b!), enumerated in
/// graded-lexicographic order, so feature layouts are stable across runs.
struct KernelParams {
  std::size_t dim = 0;
  double radius = 1.0;
  double epsilon_s = 0.1;
  int degree = 0;               // s
  std::size_t feature_count = 0;  // r = C(s+d, d)
  double gamma = 1.0;           // max_j radius^j / sqrt(j!)

  /// Exponent vectors, row i = multi-index of feature i (feature_count x dim).
  std::vector<int> exponents;

  /// One-multiplication recurrence: feature i = feature[parent[i]]
  /// * (x[parent_coord[i]] / sqrt(dim)) * step_scale[i]. Entry 0 is the
  /// constant 1.
  std::vector<std::size_t> parent;
  std::vector<int> parent_coord;
  std::vector<double> step_scale;  // 1/sqrt(b_k)

  /// Analytic max of feature i over [0, radius]^d:
  /// (radius/sqrt(dim))^{|b|} / sqrt(b!). Always <= gamma.
  std::vector<double> coordinate_max;

  std::span<const int> multi_index(std::size_t i) const {
    return std::span<const int>(exponents.data() + i * dim, dim);
  }
};

/// Tail sum_{j > degree} radius^(2j) / j!, summed forward with a geometric
/// remainder bound (no cancellation).
double taylor_tail(double radius, int degree);

/// Smallest degree whose Taylor tail is <= epsilon_s, with the multi-index
/// enumeration and recurrence tables filled in. Throws InfeasibleError when
/// the feature count would exceed feature_cap.
KernelParams select_params(std::size_t dim, double radius, double epsilon_s,
                           std::size_t feature_cap = 1'000'000);

/// Enumeration used by select_params, exposed for direct testing: all
/// multi-indices with |b| <= degree in graded-lexicographic order.
std::vector<std::vector<int>> enumerate_multi_indices(std::size_t dim,
                                                      int degree);

void feature_map(const KernelParams& params, std::span<const double> x,
                 std::span<double> out);
std::vector<double> feature_map(const KernelParams& params,
                                std::span<const double> x);

/// n x r matrix with row i = feature_map(points row i).
Matrix feature_matrix(const KernelParams& params, const Matrix& points);

/// |<P(x),P(y)> - exp(<x,y>/dim)|.
double kernel_error(const KernelParams& params, std::span<const double> x,
                    std::span<const double> y);

}  // namespace dpxattn
