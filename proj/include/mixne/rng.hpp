#pragma once

#include <cstdint>
#include <random>

namespace mixne {

/// Derives an independent 64-bit stream seed from a base seed and a stream id
/// (SplitMix64 finalizer applied to the pair).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator used everywhere randomness is consumed.
///
/// Uniforms take the top 53 bits of a `std::mt19937_64` draw. Standard normals
/// use the Box-Muller transform on two uniforms and cache the second variate,
/// so a sequence of `normal()` calls consumes one engine draw per variate on
/// average. Neither transform depends on the standard library's distribution
/// classes, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform index in [0, n); n must be positive.
  std::uint64_t index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace mixne
