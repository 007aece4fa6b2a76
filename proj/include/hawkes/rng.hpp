#pragma once

#include <cmath>
#include <cstdint>

namespace hawkes {

/// Counter-based generator (splitmix64 finalizer over a keyed counter).
/// Streams are identified by a key; `child` derives a decorrelated stream
/// from a label without advancing the parent, so draw order is independent
/// of how work is scheduled. Every draw is a pure function of (key, counter).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix(seed + kGamma)) {}

  std::uint64_t next_u64() {
    counter_ += kGamma;
    return mix(key_ ^ counter_);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Standard normal via Box-Muller (two uniforms per draw).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  std::size_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean > 64.0) {
      // Split large means; a Poisson sum of independent halves is exact.
      return poisson(mean / 2.0) + poisson(mean / 2.0);
    }
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  /// Derived stream for `label`; does not consume any parent draws.
  RngStream child(std::uint64_t label) const {
    RngStream out(0);
    out.key_ = mix(key_ + (label + 1) * kGamma2);
    out.counter_ = 0;
    return out;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kGamma2 = 0xD1B54A32D192ED03ULL;
  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hawkes
