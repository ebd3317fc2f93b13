#pragma once

#include <cstdint>

namespace spoqc {

// SplitMix64 mixing step. Used for seeding and for deriving independent
// stream seeds; never used as the sampling generator itself.
struct SplitMix64 {
  std::uint64_t state;

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ (Blackman & Vigna). Counter-free core generator; streams are
// made counter-based by construction: every shot owns a generator seeded
// from (master_seed, shot_index), so batches are reproducible under any
// parallel schedule.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) noexcept {
    SplitMix64 sm{seed};
    for (auto& w : s_) w = sm.next();
  }

  constexpr std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return (next() >> 11) * 0x1.0p-53; }

  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

// Absorbs a word into a stream seed. Chaining absorptions derives seeds for
// nested scopes (experiment -> point -> shot) that never collide in practice.
constexpr std::uint64_t absorb_stream(std::uint64_t seed, std::uint64_t word) noexcept {
  SplitMix64 sm{seed ^ (word * 0xd1b54a32d192ed03ULL)};
  std::uint64_t a = sm.next();
  return a ^ sm.next();
}

// Per-shot generator: depends only on (master_seed, shot_index).
constexpr Rng shot_rng(std::uint64_t master_seed, std::uint64_t shot_index) noexcept {
  return Rng(absorb_stream(master_seed, shot_index));
}

}  // namespace spoqc
