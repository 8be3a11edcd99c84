#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace collisionlab {

// Variate transforms are written out by hand; std distributions differ across
// standard libraries.
using Engine = std::mt19937_64;

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash64(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

/// Stream for one walker of one Monte Carlo replica.
constexpr std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t replica,
                                      std::uint64_t walker) noexcept {
  return hash64({master_seed, replica, walker});
}

inline Engine make_engine(SeedSpec spec) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.master_seed),
                    static_cast<std::uint32_t>(spec.master_seed >> 32),
                    static_cast<std::uint32_t>(spec.stream_id),
                    static_cast<std::uint32_t>(spec.stream_id >> 32)};
  return Engine(seq);
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on {0, ..., n-1}; n > 0.
inline std::uint64_t uniform_index(Engine& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// Exponential holding time; rate 0 never fires.
inline double exponential(Engine& rng, double rate) {
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-uniform01(rng)) / rate;
}

}  // namespace collisionlab
