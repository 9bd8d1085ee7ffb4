#include "addlevy/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace addlevy::rng {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = splitmix64(seed ^ 0x243f6a8885a308d3ull);
  x = splitmix64(x + a);
  x = splitmix64(x + b);
  return x;
}

double Stream::open01() {
  for (;;) {
    double u = uniform01();
    if (u > 0.0) return u;
  }
}

double Stream::gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  double u1 = open01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(t);
  has_cached_gaussian_ = true;
  return r * std::cos(t);
}

void Stream::gaussian_fill(std::span<double> out) {
  for (double& v : out) v = gaussian();
}

double Stream::exponential() { return -std::log(open01()); }

double Stream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost by one and correct with a power of a uniform.
    double g = gamma(shape + 1.0);
    return g * std::pow(open01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = gaussian();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = open01();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Stream::beta(double a, double b) {
  double x = gamma(a);
  double y = gamma(b);
  return x / (x + y);
}

double Stream::positive_stable(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("positive_stable: alpha must lie in (0,1)");
  // S = (a(theta)/W)^((1-alpha)/alpha), theta uniform on (0,pi), W ~ Exp(1),
  // log a(theta) = log sin((1-a)theta) + (a/(1-a)) log sin(a theta)
  //               - (1/(1-a)) log sin(theta).
  double u = open01();
  double theta = std::numbers::pi * u;
  double w = exponential();
  double log_a = std::log(std::sin((1.0 - alpha) * theta)) +
                 (alpha / (1.0 - alpha)) * std::log(std::sin(alpha * theta)) -
                 (1.0 / (1.0 - alpha)) * std::log(std::sin(theta));
  return std::exp(((1.0 - alpha) / alpha) * (log_a - std::log(w)));
}

}  // namespace addlevy::rng
