#pragma once

#include <cstdint>
#include <initializer_list>

namespace qsid {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stable seed-splitting hash: h = mix64(h ^ w) folded over the words,
/// starting from h = 0. Used for every derived RNG stream in the repo.
constexpr std::uint64_t hash64(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0;
  for (std::uint64_t w : words) h = mix64(h ^ w);
  return h;
}

// Stream tags keep derived seeds of different purposes apart.
inline constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;      // "noise"
inline constexpr std::uint64_t kSystemStream = 0x73797374656dULL;   // "system"
inline constexpr std::uint64_t kOptimizerStream = 0x6f7074ULL;      // "opt"
inline constexpr std::uint64_t kInitStream = 0x696e6974ULL;         // "init"

}  // namespace qsid
