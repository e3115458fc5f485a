#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace laesim {

// Seeded random stream. Every stochastic component owns one of these so that
// runs are reproducible and independent components never share state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Derives an independent child stream. Mixing constants are from
  // splitmix64 so that nearby (seed, role, index) tuples decorrelate.
  static RngStream derive(std::uint64_t seed, std::uint64_t role, std::uint64_t index = 0) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (role + 1) + 0xbf58476d1ce4e5b9ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return RngStream(z ^ (z >> 31));
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  // Inclusive bounds.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  double normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  double gamma(double shape, double scale = 1.0) {
    return std::gamma_distribution<double>(shape, scale)(engine_);
  }

  // Trials-until-first-success geometric, support {1, 2, ...}.
  std::int64_t geometric_from_one(double p_success) {
    if (p_success <= 0.0 || p_success > 1.0)
      throw std::invalid_argument("geometric_from_one: p must be in (0, 1]");
    if (p_success == 1.0) return 1;
    return 1 + std::geometric_distribution<std::int64_t>(p_success)(engine_);
  }

  template <typename T>
  const T& pick(std::span<const T> choices) {
    if (choices.empty()) throw std::invalid_argument("pick: empty choice set");
    return choices[static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(choices.size()) - 1))];
  }

  template <typename T>
  const T& pick(const std::vector<T>& choices) {
    return pick(std::span<const T>(choices));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace laesim
