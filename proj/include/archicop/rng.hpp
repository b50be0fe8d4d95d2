#pragma once

#include <cstdint>

namespace archicop {

/// Counter-based uniform stream. Output i is a SplitMix64 finaliser applied
/// to key + (i + 1) * golden-gamma, so the stream is fully defined by the
/// 64-bit key and reproducible on any platform. split(j) derives an
/// independent child key, which is how per-row and per-thread streams are
/// obtained from one seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * kGamma);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential();
  double normal();
  /// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 via the U^(1/shape) boost.
  double gamma(double shape);

  Rng split(std::uint64_t stream) const {
    Rng child(0);
    child.key_ = mix(key_ ^ mix(stream + 0x3c6ef372fe94f82bULL));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace archicop
