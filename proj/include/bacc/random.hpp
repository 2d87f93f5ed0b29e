// SPDX-License-Identifier: Apache-2.0
//
// Portable seeded randomness. The standard distributions are
// implementation-defined, so everything that feeds a reproducible artifact
// (manifests, shuffles, initial weights) draws from these helpers instead.
//
#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>

namespace bacc {

class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed = 0) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection; bound must be positive.
  uint64_t below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin(double p = 0.5) { return unit() < p; }

  template <typename T> void shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i)
      std::swap(items[i - 1], items[below(i)]);
  }

private:
  uint64_t state_;
};

/// Derives an independent stream seed from a base seed and a path of keys.
inline uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> keys) {
  SplitMix64 g(seed ^ 0x6a09e667f3bcc909ull);
  uint64_t h = g.next();
  for (uint64_t k : keys) {
    SplitMix64 step(h ^ (k * 0x9e3779b97f4a7c15ull + 0x3c6ef372fe94f82bull));
    h = step.next();
  }
  return h;
}

} // namespace bacc
