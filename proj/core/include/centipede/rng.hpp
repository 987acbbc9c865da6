#pragma once

#include <cstdint>

namespace centipede {

// SplitMix64.  Every random draw in the toolkit flows through streams
// derived from (seed, tag...) tuples, so output is reproducible under any
// parallel schedule: a worker never shares a stream with another worker.
struct SplitMix64 {
  std::uint64_t state = 0;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    return mix(state);
  }

  // uniform double in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n); modulo bias is negligible for n << 2^64
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Derive an independent child stream from a seed and a tuple of tags.
// Each tag is folded through the finalizer so that distinct tuples give
// decorrelated streams.
inline SplitMix64 rng_stream(std::uint64_t seed) {
  return SplitMix64{SplitMix64::mix(seed + 0x9E3779B97F4A7C15ull)};
}

template <class... Tags>
SplitMix64 rng_stream(std::uint64_t seed, std::uint64_t tag, Tags... rest) {
  return rng_stream(SplitMix64::mix(seed ^ (tag + 0xD1B54A32D192ED03ull)),
                    rest...);
}

}  // namespace centipede
