// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>

namespace bgk {

/// splitmix64 stream.  Used instead of <random> engines plus distributions
/// because the standard distributions are implementation-defined; surveys and
/// sampled oracles must produce identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for sample `index` of a seeded experiment, so results
  /// do not depend on evaluation order.
  static Rng for_sample(std::uint64_t seed, std::uint64_t index) {
    return Rng(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

 private:
  std::uint64_t state_;
};

}  // namespace bgk
