// Seeded random source with platform-independent distributions.
//
// std::uniform_int_distribution and friends are implementation-defined, so
// the draws here are built directly on the mt19937_64 bit stream to keep
// seeded runs identical across standard libraries.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace chipscore {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [low, high]; requires low <= high.
  std::int64_t uniform_int(std::int64_t low, std::int64_t high);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform double in [low, high).
  double uniform_real(double low, double high) { return low + (high - low) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with a key so that per-item streams are independent of
/// processing order.
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace chipscore
