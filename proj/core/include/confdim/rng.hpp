#pragma once

#include <cstdint>

namespace confdim {

// Counter-based generator: draw i of stream s under seed k is a pure function
// of (k, s, i), so parallel sampling reproduces the sequential result.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(mix(seed_ ^ mix(stream_)) + counter);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  CounterRng substream(std::uint64_t s) const { return CounterRng(seed_, mix(stream_ + 0x632be59bd9b4e019ULL) ^ s); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace confdim
