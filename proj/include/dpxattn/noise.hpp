#pragma once

#include <cstdint>
#include <random>

namespace dpxattn {

/// Parameters of one truncated Laplace draw: sensitivity, privacy budget, and
/// the derived support bound B. Immutable and freely shareable.
class NoiseSpec {
 public:
  /// Validates sensitivity >= 0, epsilon > 0 and delta in (0,1).
  NoiseSpec(double sensitivity, double epsilon, double delta);

  double sensitivity() const { return sensitivity_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }

  /// Support half-width B = (sensitivity/epsilon) * ln(1 + (e^eps - 1)/(2 delta)).
  double bound() const;

  /// Closed-form variance of the truncated Laplace distribution.
  double variance() const;

 private:
  double sensitivity_;
  double epsilon_;
  double delta_;
};

/// Deterministic 64-bit random stream. The same seed always reproduces the
/// same draw sequence bit-for-bit. Single-owner: concurrent use requires
/// independent child streams obtained from split().
///
/// Every draw increments a process-global counter (see global_draw_count),
/// which the test suite uses to prove that no randomness is consumed after
/// data-structure initialization.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform in [0, 1) with 53 random bits. Engine-portable: the mapping from
  /// raw engine output to the unit interval is fixed here, not delegated to
  /// std::uniform_real_distribution.
  double next_unit();

  std::uint64_t next_u64();

  /// Child stream with seed = hash(parent_seed, index). Children with
  /// distinct indices are independent; the parent state is not advanced.
  Rng split(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draw_count() const { return draws_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

/// Total draws consumed by all Rng instances in this process.
std::uint64_t global_draw_count();

/// One draw from TLap(sensitivity, epsilon, delta): density proportional to
/// exp(-epsilon |z| / sensitivity) on [-B, B]. Inverse-CDF transform, one
/// uniform per draw. Zero sensitivity returns exactly 0.
double sample_truncated_laplace(const NoiseSpec& spec, Rng& rng);

/// Unbounded Laplace draw with scale sensitivity/epsilon. Comparison helper
/// only; the data structures never use it.
double sample_laplace(double sensitivity, double epsilon, Rng& rng);

/// Variance 2 sensitivity^2 / epsilon^2 of the plain Laplace mechanism.
double laplace_variance(double sensitivity, double epsilon);

/// Variance 2 sensitivity^2 ln(1.25/delta) / epsilon^2 of the Gaussian
/// mechanism, for comparison tables.
double gaussian_variance(double sensitivity, double epsilon, double delta);

}  // namespace dpxattn
