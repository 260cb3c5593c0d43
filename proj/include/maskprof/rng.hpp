#pragma once

#include <cstdint>
#include <random>

namespace maskprof {

// splitmix64; used to derive independent per-scene seeds from a base seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ b);
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// mt19937_64 has a standardized output sequence; the bounded/real draws below
// avoid std distributions, whose output is implementation-defined.
using Rng = std::mt19937_64;

inline std::uint64_t draw_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// integer in [lo, hi], inclusive
inline long draw_int(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(draw_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// real in [0, 1)
inline double draw_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double draw_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * draw_unit(rng);
}

}  // namespace maskprof
