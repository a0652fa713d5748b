#pragma once

#include <cstdint>
#include <random>

namespace netinf {

// SplitMix64 finalizer (a bijection on 64-bit words).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Splittable counter construction: the i-th derived seed is the SplitMix64
// output at state base + (i+1)*golden. Injective in `index` for any base,
// so parallel and serial replicate schedules see identical streams.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;
  return mix64(base + (index + 1) * golden);
}

// Uniform double in [0, 1) with 53 random bits. Used instead of
// std::uniform_real_distribution where generator output must be a stable
// function of the engine stream.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace netinf
