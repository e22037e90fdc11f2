#pragma once

#include <cmath>
#include <cstdint>

#include "cocokit/types.hpp"

namespace cocokit {

// Self-contained deterministic PRNG: xoshiro256++ seeded through splitmix64.
// Platform RNGs (and std distributions) are implementation-defined, which
// would break trace reproducibility across toolchains, so the generator and
// all transforms live here with their constants.
//
// References: Blackman & Vigna, "Scrambled linear pseudorandom number
// generators" (xoshiro256++), and Steele, Lea & Flood (splitmix64).
class Rng {
 public:
  Rng() : Rng(0) {}

  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  /** Next 64 uniform random bits (xoshiro256++). */
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /** Uniform double in [0, 1) with 53 random bits. */
  scalar_t uniform() {
    return static_cast<scalar_t>(next_u64() >> 11) * 0x1.0p-53;
  }

  /** Uniform double in [lo, hi). */
  scalar_t uniform(scalar_t lo, scalar_t hi) {
    return lo + (hi - lo) * uniform();
  }

  /** Standard normal via Box-Muller (both transform constants explicit). */
  scalar_t normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    scalar_t u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();  // log(0) guard; p = 2^-53 per draw
    const scalar_t u2 = uniform();
    const scalar_t radius = std::sqrt(-2.0 * std::log(u1));
    const scalar_t angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /** Independent stream derived from (seed, stream_id); used to hand each
   *  run / subsystem its own generator. */
  Rng split(std::uint64_t stream_id) const {
    std::uint64_t sm = seed_;
    const std::uint64_t base = splitmix64(sm);
    std::uint64_t mixed = base ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    return Rng(splitmix64(mixed));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
  std::uint64_t seed_;
  scalar_t spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cocokit
