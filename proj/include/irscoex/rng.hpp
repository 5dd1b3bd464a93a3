#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

// Counter-based randomness: every slot draws from an engine keyed by
// (seed, campaign, slot), so any partition of slots across workers replays
// the exact same numbers. Gaussian and bounded-integer draws are implemented
// from raw 64-bit words to stay byte-identical across standard libraries.

namespace irscoex {

constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t campaign, std::uint64_t slot) {
  return mix64(mix64(mix64(seed) ^ campaign) ^ slot);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t campaign, std::uint64_t slot) {
  return std::mt19937_64(stream_key(seed, campaign, slot));
}

// uniform in [0, 1) from the top 53 bits
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// uniform integer in [0, n) by rejection
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
  const std::uint64_t limit = ~0ull - ~0ull % n;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % n;
}

// CN(0, 1): unit-variance circularly-symmetric complex Gaussian (Box-Muller)
inline std::complex<double> complex_normal(std::mt19937_64& g) {
  const double u = 1.0 - uniform01(g);  // (0, 1], keeps log finite
  const double r = std::sqrt(-std::log(u));
  const double t = 6.283185307179586476925286766559 * uniform01(g);
  return {r * std::cos(t), r * std::sin(t)};
}

// l distinct indices from {0 .. n-1}, uniform without replacement (Floyd)
std::vector<int> sample_distinct(std::mt19937_64& g, int n, int l);

// as above but conditioned on `required` being one of the l indices
std::vector<int> sample_distinct_containing(std::mt19937_64& g, int n, int l, int required);

}  // namespace irscoex
