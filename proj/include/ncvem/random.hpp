#pragma once

#include <cstdint>

namespace ncvem {

/// SplitMix64 generator. Independent streams are derived from (seed, key)
/// so a draw depends only on its key, not on how many draws came before.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t key) {
    SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ull * (key + 1)));
    g.next();
    return SplitMix64(g.next());
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace ncvem
