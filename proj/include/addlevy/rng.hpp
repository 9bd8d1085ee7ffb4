#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace addlevy::rng {

/// SplitMix64 finalizer; used to derive independent stream seeds from
/// (seed, purpose, index) tuples so that parallel work units consume
/// disjoint, order-insensitive random streams.
std::uint64_t splitmix64(std::uint64_t x);

/// Combine a base seed with up to two stream identifiers.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Deterministic random stream. The engine is std::mt19937_64 (its output
/// sequence is fixed by the standard); every variate transform below is
/// implemented here rather than with std::*_distribution, whose algorithms
/// are implementation-defined and would break bitwise reproducibility.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
      : engine_(derive_seed(seed, a, b)) {}

  std::uint64_t raw() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); never returns an exact endpoint.
  double open01();

  /// Standard normal via Box-Muller (second value cached).
  double gaussian();
  void gaussian_fill(std::span<double> out);

  /// Exp(1).
  double exponential();

  /// Gamma(shape, 1), Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  /// Beta(a, b), a, b > 0.
  double beta(double a, double b);

  /// Positive alpha-stable S with E exp(-l S) = exp(-l^alpha), 0 < alpha < 1
  /// (Kanter's representation).
  double positive_stable(double alpha);

 private:
  std::mt19937_64 engine_;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace addlevy::rng
