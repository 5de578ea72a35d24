#pragma once

#include <cstdint>

namespace cantor {

// Counter-based generator: output i is a pure function of (seed, i), built
// from the splitmix64 finalizer.  Platform-independent and reproducible,
// which the simulation contracts require.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(mix(seed ^ 0x6a09e667f3bcc909ull)) {}

  std::uint64_t next_u64() { return at(counter_++); }

  // Output for an explicit counter value, independent of generator state.
  std::uint64_t at(std::uint64_t counter) const {
    return mix(seed_ + counter * 0x9e3779b97f4a7c15ull);
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  int bit() { return static_cast<int>(next_u64() >> 63); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace cantor
