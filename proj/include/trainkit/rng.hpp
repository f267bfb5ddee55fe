// Deterministic counter-based RNG. Simulation results are contractually
// bitwise-reproducible for a given seed, so we cannot rely on std::mt19937 or
// std::exponential_distribution (distribution algorithms vary across standard
// library implementations). SplitMix64 is the standard 64-bit mixer: the state
// walks a Weyl sequence and every output is a pure function of the counter,
// which also makes independent substreams cheap.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace trainkit {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Independent generator for substream `stream` of `seed` (one per Monte-Carlo
// run). Streams with distinct (seed, stream) pairs do not overlap in practice:
// both inputs pass through the full mixer before seeding the Weyl walk.
inline SplitMix64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(SplitMix64::mix(seed) ^
                    SplitMix64::mix(stream * 0x9e3779b97f4a7c15ULL +
                                    0x632be59bd9b4e019ULL));
}

// Exponential variate with the given mean. mean = +inf yields +inf (a process
// that never fires), which is how "no failures" is expressed.
inline double sample_exponential(SplitMix64& rng, double mean) {
  if (std::isinf(mean)) return std::numeric_limits<double>::infinity();
  // 1 - u is in (0, 1], so the log is finite and the result non-negative.
  return -mean * std::log(1.0 - rng.next_unit());
}

}  // namespace trainkit
