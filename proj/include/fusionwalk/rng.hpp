#pragma once

#include <array>
#include <cstdint>

namespace fusionwalk {

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finaliser.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += detail::kGolden;
    return detail::mix64(state);
  }
};

// xoshiro256** (Blackman/Vigna), seeded through SplitMix64 as its authors
// recommend. Small, fast, and reproducible across platforms.
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : s_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Top 53 bits: the numerator of a uniform variate with denominator 2^53.
  std::uint64_t next53() { return next() >> 11; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_;
};

// Stream k of a run: an independent generator keyed by the k-th output of
// the SplitMix64 sequence for `seed`. Serial and parallel execution of the
// trajectories therefore draw identical numbers.
inline Xoshiro256StarStar trajectory_stream(std::uint64_t seed, std::uint64_t k) {
  return Xoshiro256StarStar(detail::mix64(seed + (k + 1) * detail::kGolden));
}

}  // namespace fusionwalk
