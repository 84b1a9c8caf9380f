#pragma once

#include <cmath>
#include <cstdint>

namespace imdd {

// splitmix64 step; also used to mix seed components.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (master, stream, block) so that
// parallel sweep points and Monte-Carlo blocks are reproducible regardless
// of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t block = 0) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64(s);
  s ^= block * 0xd1b54a32d192ed03ULL;
  return splitmix64(s) ^ (a + (b << 1));
}

// Small deterministic generator: splitmix64 stream with Box-Muller normals.
// Self-contained so that seeded output is stable across platforms and
// standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in (0, 1]
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  std::uint32_t uniform_int(std::uint32_t n) {
    return static_cast<std::uint32_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace imdd
