#pragma once

#include <cstdint>
#include <random>

namespace epiwalk {

// Stream tags keep the independent generator streams of one trial from
// colliding: every consumer derives its engine from (seed, tag[, index]).
enum class StreamTag : std::uint64_t {
  graph = 1,
  placement = 2,
  particle = 3,
  interaction = 4,
  sampler = 5,
  spectral = 6,
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Splittable seeding: the stream for (seed, tag, index) never depends on how
// many other streams exist, so adding particles to a trial cannot perturb
// the trajectories of the existing ones.
inline std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag,
                                   std::uint64_t index = 0) {
  std::uint64_t s = detail::splitmix64(seed);
  s = detail::splitmix64(s ^ static_cast<std::uint64_t>(tag));
  s = detail::splitmix64(s ^ (index + 0x51ed270b7a2cf345ULL));
  return std::mt19937_64(s);
}

// Unbiased draw from {0, ..., bound-1}. Hand-rolled (Lemire rejection) so
// results are identical across standard library implementations.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < bound) {
    const std::uint64_t t = -bound % bound;
    while (lo < t) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& rng, double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return uniform_unit(rng) < p;
}

}  // namespace epiwalk
