#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace ymtg {

// Counter-based generator: a SplitMix64 finalizer applied to key+counter.
// Every draw is a pure function of (seed, stream, counter), so parallel and
// serial sample loops produce bit-identical streams on any platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed ^ 0x9e3779b97f4a7c15ull) + stream)), ctr_(0) {}

  /// Independent child stream; tag values needn't be distinct from seeds.
  CounterRng fork(std::uint64_t tag) const {
    CounterRng r(0);
    r.key_ = mix(key_ ^ mix(tag + 0x632be59bd9b4e019ull));
    r.ctr_ = 0;
    return r;
  }

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++ctr_); }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  std::complex<double> normal_complex() {
    return {normal() * M_SQRT1_2, normal() * M_SQRT1_2};
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t ctr_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ymtg
