#pragma once

#include <cmath>
#include <cstdint>

#include "core/types.hpp"

namespace lpscma {

// Counter-based generator (splitmix64 stream). A stream is addressed by
// (seed, substream...) so independent work items (frames, restarts, rounds)
// draw from disjoint, reproducible streams regardless of thread schedule.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  CounterRng derive(uint64_t substream) const {
    CounterRng r(0);
    r.key_ = mix(key_ ^ mix(substream + 0x9e3779b97f4a7c15ULL));
    r.ctr_ = 0;
    return r;
  }

  uint64_t next_u64() {
    uint64_t z = key_ + (++ctr_) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [a,b)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  uint64_t next_below(uint64_t n) {
    // rejection-free modulo is fine here; n is tiny vs 2^64 in all call sites
    return next_u64() % n;
  }

  // standard normal pair (Box-Muller, explicit so results do not depend on
  // the standard library's distribution implementation)
  void normal_pair(double& z0, double& z1) {
    double u1 = 1.0 - uniform();  // (0,1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * kPi * u2);
    z1 = r * std::sin(2.0 * kPi * u2);
  }

  // complex Gaussian with E|z|^2 = var
  cd complex_gaussian(double var) {
    double a, b;
    normal_pair(a, b);
    double s = std::sqrt(var * 0.5);
    return cd(s * a, s * b);
  }

 private:
  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t key_;
  uint64_t ctr_ = 0;
};

}  // namespace lpscma
