#pragma once

#include <cstdint>
#include <random>

namespace mmnetloc {

// splitmix64 finalizer; decorrelates nearby seed values.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent sub-stream seed from a base seed and salts.
// All randomness in the library flows through this: every (seed, salt...)
// combination names one reproducible stream.
constexpr std::uint64_t mix_seed(std::uint64_t base) { return splitmix64(base); }

template <class... Rest>
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt, Rest... rest) {
  return mix_seed(splitmix64(base ^ splitmix64(salt)), rest...);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace mmnetloc
