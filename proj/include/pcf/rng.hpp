#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pcf {

// Seeded generator whose derived draws (bounded integers, uniforms, normals)
// are computed here rather than through <random> distributions, whose output
// is implementation-defined. Schedules and mock judgments therefore replay
// bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), unbiased. bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// 64-bit FNV-1a.
std::uint64_t hash_string(std::string_view text);

}  // namespace pcf
