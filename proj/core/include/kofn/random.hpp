#pragma once

#include <cstdint>
#include <random>

namespace kofn {

// All Monte Carlo code draws from this engine type; callers own the handle.
using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent per-worker seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream-split function: seed of stream `stream` under root seed `root`.
// Stream i of root r is splitmix64(splitmix64(r) ^ splitmix64(i + 1)).
constexpr std::uint64_t stream_seed(std::uint64_t root,
                                    std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(root) ^ splitmix64(stream + 1));
}

inline Rng make_stream(std::uint64_t root, std::uint64_t stream) {
  return Rng{stream_seed(root, stream)};
}

// Uniform integer in [0, bound) by Lemire's multiply-shift rejection; unlike
// std::uniform_int_distribution the output sequence is fixed across standard
// libraries.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  __extension__ using u128 = unsigned __int128;
  std::uint64_t x = rng();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool fair_bit(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace kofn
