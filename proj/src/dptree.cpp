#include "dpxattn/dptree.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace dpxattn {

namespace {

std::uint64_t fnv1a(std::span<const double> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

int ceil_log2(std::size_t n) {
  int l = 0;
  std::size_t p = 1;
  while (p < n) {
    p <<= 1;
    ++l;
  }
  return l;
}

}  // namespace

DPTree::DPTree(std::span<const double> values, double sensitivity,
               double epsilon, double delta, Rng& rng, bool noise_enabled)
    : n_(values.size()),
      n_pad_(1),
      levels_(1),
      // validated below once levels_ is known; placeholder keeps ctor order
      node_spec_(sensitivity, epsilon, delta),
      noise_enabled_(noise_enabled),
      digest_(fnv1a(values)) {
  if (values.empty()) throw std::invalid_argument("DPTree: empty input array");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("DPTree: input entries must be finite");

  while (n_pad_ < n_) n_pad_ <<= 1;
  levels_ = std::max(1, ceil_log2(n_pad_));
  node_spec_ = NoiseSpec(sensitivity, epsilon / levels_, delta / levels_);

  exact_.assign(2 * n_pad_, 0.0);
  noised_.assign(2 * n_pad_, 0.0);
  std::copy(values.begin(), values.end(), exact_.begin() + n_pad_);

  // Leaves first, then internal levels bottom-up; one frozen draw per node.
  for (std::size_t k = n_pad_; k < 2 * n_pad_; ++k) {
    noised_[k] = exact_[k];
    if (noise_enabled_) noised_[k] += sample_truncated_laplace(node_spec_, rng);
  }
  for (std::size_t level_size = n_pad_ / 2; level_size >= 1; level_size /= 2) {
    for (std::size_t k = level_size; k < 2 * level_size; ++k) {
      exact_[k] = exact_[2 * k] + exact_[2 * k + 1];
      noised_[k] = exact_[k];
      if (noise_enabled_)
        noised_[k] += sample_truncated_laplace(node_spec_, rng);
    }
    if (level_size == 1) break;
  }
}

std::vector<std::size_t> DPTree::decompose(std::size_t first,
                                           std::size_t last) const {
  if (first < 1 || last < first || last > n_)
    throw std::invalid_argument("DPTree: query indices out of range");
  std::vector<std::size_t> nodes;
  std::size_t lo = n_pad_ + first - 1;
  std::size_t hi = n_pad_ + last - 1;
  while (lo <= hi) {
    if (lo & 1u) nodes.push_back(lo++);
    if (!(hi & 1u)) nodes.push_back(hi--);
    if (lo > hi) break;
    lo >>= 1;
    hi >>= 1;
  }
  return nodes;
}

std::pair<std::size_t, std::size_t> DPTree::node_span(std::size_t node) const {
  std::size_t lo = node;
  std::size_t hi = node;
  while (lo < n_pad_) {
    lo = 2 * lo;
    hi = 2 * hi + 1;
  }
  return {lo - n_pad_ + 1, hi - n_pad_ + 1};
}

IntervalQueryResult DPTree::query(std::size_t first, std::size_t last) const {
  IntervalQueryResult result;
  for (std::size_t node : decompose(first, last)) {
    result.value += noised_[node];
    ++result.node_count;
  }
  return result;
}

double DPTree::true_query(std::size_t first, std::size_t last) const {
  double sum = 0.0;
  for (std::size_t node : decompose(first, last)) sum += exact_[node];
  return sum;
}

int boost_copy_count(double delta_fail) {
  if (!std::isfinite(delta_fail) || delta_fail <= 0.0 || delta_fail >= 1.0)
    throw std::invalid_argument("boost_copy_count: delta_fail must lie in (0,1)");
  int copies = static_cast<int>(std::ceil(3.0 * std::log(1.0 / delta_fail)));
  copies = std::max(copies, 1);
  if (copies % 2 == 0) ++copies;
  return copies;
}

std::vector<DPTree> make_boosted_trees(std::span<const double> values,
                                       double sensitivity, double epsilon,
                                       double delta, int copies, Rng& rng,
                                       bool noise_enabled) {
  if (copies < 1)
    throw std::invalid_argument("make_boosted_trees: need at least one copy");
  std::vector<DPTree> trees;
  trees.reserve(copies);
  for (int i = 0; i < copies; ++i) {
    Rng child = rng.split(static_cast<std::uint64_t>(i));
    trees.emplace_back(values, sensitivity, epsilon / copies, delta / copies,
                       child, noise_enabled);
  }
  return trees;
}

double boosted_query(std::span<const DPTree> trees, std::size_t first,
                     std::size_t last) {
  if (trees.empty())
    throw std::invalid_argument("boosted_query: empty tree list");
  const std::size_t n = trees.front().size();
  const std::uint64_t digest = trees.front().input_digest();
  for (const DPTree& t : trees)
    if (t.size() != n || t.input_digest() != digest)
      throw std::invalid_argument(
          "boosted_query: trees cover mismatched input arrays");
  std::vector<double> values;
  values.reserve(trees.size());
  for (const DPTree& t : trees) values.push_back(t.query(first, last).value);
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  if (m % 2 == 1) return values[m / 2];
  return 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

}  // namespace dpxattn
