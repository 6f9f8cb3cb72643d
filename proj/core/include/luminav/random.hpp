#pragma once

#include <cstdint>
#include <random>

namespace luminav {

/// Seeded random stream with portable double generation. The standard
/// distributions are implementation-defined, so uniform doubles are built
/// directly from the top 53 bits of the mt19937_64 output; two runs with
/// the same seed produce the same sequence on any platform.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 gen_;
};

/// splitmix64 finalizer; used to derive independent substream seeds from
/// (seed, tag) pairs without correlating the streams.
inline uint64_t mix_seed(uint64_t seed, uint64_t tag) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace luminav
