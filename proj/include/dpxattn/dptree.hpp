#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpxattn/noise.hpp"

namespace dpxattn {

struct IntervalQueryResult {
  double value = 0.0;
  int node_count = 0;
};

/// Summation segment tree with one frozen truncated Laplace draw per node.
///
/// The input is padded with zeros to the next power of two. Every node k
/// holds the exact subtree sum and a noised copy drawn once at init with the
/// per-node budget (sensitivity, epsilon/levels, delta/levels) where
/// levels = max(1, ceil(log2(padded leaf count))). Queries decompose an
/// interval into at most 2*levels canonical nodes and sum the frozen noised
/// values; no randomness is consumed after construction. Immutable, so
/// concurrent queries are safe.
class DPTree {
 public:
  DPTree(std::span<const double> values, double sensitivity, double epsilon,
         double delta, Rng& rng, bool noise_enabled = true);

  /// Noised interval sum over 1-based inclusive indices [first, last].
  /// Deterministic: repeated identical queries return identical values.
  IntervalQueryResult query(std::size_t first, std::size_t last) const;

  /// Exact interval sum over the same canonical decomposition.
  double true_query(std::size_t first, std::size_t last) const;

  /// Canonical node ids covering [first, last]; for decomposition tests.
  std::vector<std::size_t> decompose(std::size_t first, std::size_t last) const;

  /// Inclusive 1-based leaf range covered by a node id.
  std::pair<std::size_t, std::size_t> node_span(std::size_t node) const;

  std::size_t size() const { return n_; }
  std::size_t padded_size() const { return n_pad_; }
  int levels() const { return levels_; }
  const NoiseSpec& node_spec() const { return node_spec_; }
  bool noise_enabled() const { return noise_enabled_; }
  double node_exact(std::size_t node) const { return exact_[node]; }
  double node_noised(std::size_t node) const { return noised_[node]; }
  std::size_t node_count_total() const { return 2 * n_pad_ - 1; }
  std::uint64_t input_digest() const { return digest_; }

 private:
  std::size_t n_ = 0;
  std::size_t n_pad_ = 1;
  int levels_ = 1;
  NoiseSpec node_spec_;
  bool noise_enabled_ = true;
  std::uint64_t digest_ = 0;
  // 1-based node arrays; node k has children 2k and 2k+1, leaves occupy
  // [n_pad, 2*n_pad).
  std::vector<double> exact_;
  std::vector<double> noised_;
};

/// Copy count ceil(3 ln(1/delta_fail)), rounded up to odd.
int boost_copy_count(double delta_fail);

/// L independent trees over the same array, copy i built from rng.split(i)
/// with the per-copy budget (epsilon/L, delta/L).
std::vector<DPTree> make_boosted_trees(std::span<const double> values,
                                       double sensitivity, double epsilon,
                                       double delta, int copies, Rng& rng,
                                       bool noise_enabled = true);

/// Median of per-tree interval queries (mean of the two middle values when
/// the copy count is even). All trees must cover the same input array.
double boosted_query(std::span<const DPTree> trees, std::size_t first,
                     std::size_t last);

}  // namespace dpxattn
