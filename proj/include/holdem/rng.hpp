#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace holdem {

/// Mixes a master seed with stream identifiers into an independent child
/// seed (splitmix64 finalizer over each component). Used so that every table,
/// seat and preflop class draws from its own reproducible stream regardless of
/// how work is scheduled across threads.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> stream);

/// Seeded generator with distribution helpers that are bit-identical across
/// standard library implementations (std:: distributions are not).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace holdem
