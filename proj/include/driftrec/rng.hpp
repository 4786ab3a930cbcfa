#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace driftrec {

// Deterministic RNG helpers. std::mt19937_64 output is fully specified by the
// standard, but std::uniform_int_distribution and std::shuffle are not, so
// every bounded draw and shuffle goes through the hand-rolled versions below.
// Fixed seed => identical draw sequence on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Unbiased draw in [0, n), Lemire's multiply-shift with rejection.
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) return 0;
    while (true) {
      std::uint64_t x = eng_();
      __uint128_t m = static_cast<__uint128_t>(x) * n;
      auto low = static_cast<std::uint64_t>(m);
      if (low < n) {
        std::uint64_t threshold = (0 - n) % n;
        if (low < threshold) continue;
      }
      return static_cast<std::uint64_t>(m >> 64);
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

// Stateless mix for deriving per-fold / per-stage seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace driftrec
