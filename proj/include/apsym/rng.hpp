#pragma once

// Counter-based random numbers: every draw is a pure function of
// (master_seed, stream_index, draw_index), so parallel substreams are
// reproducible regardless of scheduling.

#include <cstdint>
#include <limits>

namespace apsym {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t draw) {
  std::uint64_t h = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
  h = splitmix64(h ^ (stream * 0xd1b54a32d192ed03ULL));
  h = splitmix64(h ^ (draw * 0xaef17502108ef2d9ULL));
  return splitmix64(h);
}

class SeededSampler {
 public:
  SeededSampler(std::uint64_t master_seed, std::uint64_t stream_index)
      : seed_(master_seed), stream_(stream_index) {}

  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }
  std::uint64_t draws() const { return draw_; }

  std::uint64_t next_u64() { return counter_hash(seed_, stream_, draw_++); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n-1}; n >= 1. Rejection removes modulo bias.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t draw_ = 0;
};

}  // namespace apsym
