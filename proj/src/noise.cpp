#include "dpxattn/noise.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace dpxattn {

namespace {

std::atomic<std::uint64_t> g_draws{0};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

NoiseSpec::NoiseSpec(double sensitivity, double epsilon, double delta)
    : sensitivity_(sensitivity), epsilon_(epsilon), delta_(delta) {
  if (!std::isfinite(sensitivity) || sensitivity < 0.0)
    throw std::invalid_argument("NoiseSpec: sensitivity must be finite and >= 0");
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw std::invalid_argument("NoiseSpec: epsilon must be finite and > 0");
  if (!std::isfinite(delta) || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("NoiseSpec: delta must lie in (0, 1)");
}

double NoiseSpec::bound() const {
  if (sensitivity_ == 0.0) return 0.0;
  return sensitivity_ / epsilon_ *
         std::log(1.0 + (std::exp(epsilon_) - 1.0) / (2.0 * delta_));
}

double NoiseSpec::variance() const {
  if (sensitivity_ == 0.0) return 0.0;
  const double log_term =
      std::log(1.0 + (std::exp(epsilon_) - 1.0) / (2.0 * delta_));
  const double correction =
      delta_ * (log_term * log_term + 2.0 * log_term) / (std::exp(epsilon_) - 1.0);
  return 2.0 * sensitivity_ * sensitivity_ / (epsilon_ * epsilon_) *
         (1.0 - correction);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_u64() {
  ++draws_;
  g_draws.fetch_add(1, std::memory_order_relaxed);
  return engine_();
}

Rng Rng::split(std::uint64_t index) const {
  return Rng(splitmix64(seed_ ^ splitmix64(index + 0x51c3a5b1e97f14d3ULL)));
}

std::uint64_t global_draw_count() { return g_draws.load(std::memory_order_relaxed); }

double sample_truncated_laplace(const NoiseSpec& spec, Rng& rng) {
  if (spec.sensitivity() == 0.0) return 0.0;
  const double lambda = spec.epsilon() / spec.sensitivity();
  const double b = spec.bound();
  // v uniform in [-1, 1); magnitude inverted through the one-sided CDF of the
  // truncated exponential, sign taken from v.
  const double v = 2.0 * rng.next_unit() - 1.0;
  const double sign = v < 0.0 ? -1.0 : 1.0;
  const double m = std::abs(v);
  const double z = -std::log(1.0 - m * (1.0 - std::exp(-lambda * b))) / lambda;
  return sign * std::min(z, b);
}

double sample_laplace(double sensitivity, double epsilon, Rng& rng) {
  if (!std::isfinite(sensitivity) || sensitivity < 0.0)
    throw std::invalid_argument("sample_laplace: sensitivity must be finite and >= 0");
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw std::invalid_argument("sample_laplace: epsilon must be finite and > 0");
  if (sensitivity == 0.0) return 0.0;
  const double scale = sensitivity / epsilon;
  const double v = 2.0 * rng.next_unit() - 1.0;
  const double sign = v < 0.0 ? -1.0 : 1.0;
  // 1 - |v| is uniform in (0, 1]; log of it never overflows.
  return -sign * scale * std::log(1.0 - std::abs(v));
}

double laplace_variance(double sensitivity, double epsilon) {
  return 2.0 * sensitivity * sensitivity / (epsilon * epsilon);
}

double gaussian_variance(double sensitivity, double epsilon, double delta) {
  return 2.0 * sensitivity * sensitivity * std::log(1.25 / delta) /
         (epsilon * epsilon);
}

}  // namespace dpxattn
