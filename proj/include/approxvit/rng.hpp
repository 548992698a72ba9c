#pragma once

#include <cstdint>
#include <initializer_list>

namespace approxvit {

// SplitMix64 finalizer. Used as a counter-based generator: the value for
// sample i under seed s is mix64(s ^ mix64(i)), so any partition of the index
// space across workers draws the same numbers.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t counter_draw(std::uint64_t seed,
                                     std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index));
}

// Order-sensitive hash of a key tuple; derives per-task seeds.
constexpr std::uint64_t derive_seed(
    std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
  return h;
}

}  // namespace approxvit
