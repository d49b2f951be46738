#pragma once

#include <cstdint>

namespace cgw {

namespace detail {
/// splitmix64 finalizer (Steele, Lea, Flood 2014); full-period bijection.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Small counter-based generator with cheap splitting.  Every draw is a pure
/// function of (seed, position), so output is identical across platforms and
/// thread schedules; substreams derived via split() are independent of the
/// parent stream's own sequence.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return detail::mix64(state_);
  }

  /// Uniform double in [0,1) with 53 random bits.
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0,n), unbiased (Lemire 2019 with rejection).
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    while (true) {
      std::uint64_t x = next_u64();
      __uint128_t m = static_cast<__uint128_t>(x) * n;
      auto lo = static_cast<std::uint64_t>(m);
      if (lo >= n || lo >= (0 - n) % n) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  /// Child stream labelled by index; deterministic and decorrelated from the
  /// parent by two extra mixing rounds.
  RngStream split(std::uint64_t index) const {
    std::uint64_t s = detail::mix64(state_ + 0x9E3779B97F4A7C15ULL * (index + 1));
    return RngStream(detail::mix64(s + 0xBF58476D1CE4E5B9ULL));
  }

 private:
  std::uint64_t state_;
};

}  // namespace cgw
