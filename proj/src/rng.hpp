#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace cohortsel {

// Seeded random stream. Each trial owns one, keyed by (seed, stream index), so
// trials are independent and reproducible regardless of execution order.
//
// The normal transform is a fixed no-cache Box-Muller over mt19937_64 words
// rather than std::normal_distribution, whose algorithm is implementation
// defined; identical (seed, call sequence) must give identical rewards on any
// standard library.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}

  RngStream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    gen_.seed(seq);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Normal(mean, sd). sd == 0 returns the mean exactly and consumes no randomness.
  double normal(double mean, double sd) {
    if (sd == 0.0) return mean;
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Unbiased uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return x % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cohortsel
