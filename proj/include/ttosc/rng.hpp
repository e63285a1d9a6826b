#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Seeded RNG streams. Every random draw in the simulator comes from a stream
// keyed by (base seed, purpose, indices...), so traces are reproducible
// bit-for-bit and independent streams can be consumed in any order.
//
// Distribution sampling is hand-rolled on top of std::mt19937_64 because the
// standard library's distribution objects are implementation-defined; these
// helpers produce identical sequences on every platform.

namespace ttosc::rng {

// Purpose tags keep unrelated streams decorrelated even with equal indices.
enum Purpose : std::uint64_t {
  kServiceDraw = 1,
  kPopulations = 2,
  kCellRanking = 3,
  kArrivals = 4,
  kAgentInit = 5,
  kExploration = 6,
  kReplaySampling = 7,
  kBaseline = 8,
  kOracle = 9,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t acc) { return splitmix64(acc); }

template <class... Rest>
std::uint64_t mix(std::uint64_t acc, std::uint64_t next, Rest... rest) {
  return mix(splitmix64(acc ^ splitmix64(next)), rest...);
}

template <class... Ids>
std::mt19937_64 stream(std::uint64_t seed, Ids... ids) {
  return std::mt19937_64(mix(seed, static_cast<std::uint64_t>(ids)...));
}

// Uniform double in [0, 1) with 53 random bits.
inline double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * u01(g);
}

// Unbiased integer in [lo, hi] via rejection on the top bits.
inline std::int64_t uniform_int(std::mt19937_64& g, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t reject_above = std::uint64_t(-1) - std::uint64_t(-1) % span;
  std::uint64_t draw;
  do {
    draw = g();
  } while (draw >= reject_above);
  return lo + static_cast<std::int64_t>(draw % span);
}

inline bool bernoulli(std::mt19937_64& g, double p) { return u01(g) < p; }

// Fisher-Yates permutation of 0..n-1.
inline std::vector<int> permutation(std::mt19937_64& g, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int k = static_cast<int>(uniform_int(g, 0, i));
    std::swap(perm[i], perm[k]);
  }
  return perm;
}

}  // namespace ttosc::rng
