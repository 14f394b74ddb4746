#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cyclegame {

// Child seed for a named run. Stable across platforms and independent of
// which other runs exist, so adding a run never perturbs another's stream.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

// mt19937_64 plus distribution helpers implemented here rather than via
// <random> distributions, whose outputs differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform integer in [0, n), rejection sampled.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cyclegame
