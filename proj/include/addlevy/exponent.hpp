#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace addlevy {

using Complex = std::complex<double>;

enum class ExponentKind { IsotropicStable, StableSubordinator, Conjugated, Custom };

struct CustomExponentOptions {
  bool enforce_hermitian = true;  // skip the symmetry check for odd evaluators
  int check_points = 256;
};

/// A Levy exponent Psi: R^d -> C with Psi(0) = 0, Re Psi >= 0 and
/// Psi(-xi) = conj(Psi(xi)). Instances are immutable after construction and
/// safe to share across threads; evaluators must be pure.
///
/// Custom evaluators are spot-checked on a fixed seeded point cloud at
/// construction (the three invariants above); that is a sanity screen, not a
/// proof of negative-definiteness. Feeding an evaluator that is not a genuine
/// Levy exponent past the screen leaves the convergence machinery's output
/// undefined.
class LevyExponent {
 public:
  using CustomOptions = CustomExponentOptions;
  using Evaluator = std::function<Complex(std::span<const double>)>;

  /// Psi(xi) = |xi|^alpha, alpha in (0, 2].
  static LevyExponent isotropic_stable(int dim, double alpha);

  /// Strict stable subordinator on R, alpha in (0, 1):
  /// Psi(xi) = |xi|^alpha (cos(pi a/2) - i sgn(xi) sin(pi a/2)).
  static LevyExponent stable_subordinator(double alpha);

  /// Deterministic drift: Psi(xi) = -i b.xi (purely imaginary).
  static LevyExponent drift(std::vector<double> velocity);

  /// Psi identically zero (constant path).
  static LevyExponent constant(int dim);

  /// Black-box evaluator; invariants sampled at construction, throws
  /// std::invalid_argument on violation.
  static LevyExponent custom(int dim, Evaluator f, CustomOptions opts = {});

  /// Evaluate Psi(xi). Throws std::invalid_argument on dimension mismatch.
  Complex operator()(std::span<const double> xi) const;
  Complex operator()(std::initializer_list<double> xi) const {
    return (*this)(std::span<const double>(xi.begin(), xi.size()));
  }

  /// Re(1/(1 + Psi(xi))), computed as (1 + Re Psi)/|1 + Psi|^2; lies in (0, 1].
  double re_resolvent(std::span<const double> xi) const;
  double re_resolvent(std::initializer_list<double> xi) const {
    return re_resolvent(std::span<const double>(xi.begin(), xi.size()));
  }

  /// Exponent of -X: pointwise complex conjugate. Real-valued exponents are
  /// returned unchanged.
  LevyExponent conjugate() const;

  /// Exponent of the R^{2d}-valued process (X, -X): evaluates the inner
  /// exponent at xi_1 - xi_2, where the argument splits as (xi_1, xi_2).
  LevyExponent pair_difference() const;

  int dim() const;
  ExponentKind kind() const;
  /// Stable index for the stable families; NaN otherwise.
  double alpha() const;
  bool real_valued() const;

 private:
  struct Impl;
  explicit LevyExponent(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Ordered family of N component exponents sharing one ambient dimension.
class AdditiveProcess {
 public:
  explicit AdditiveProcess(std::vector<LevyExponent> components);

  int n() const { return static_cast<int>(components_.size()); }
  int dim() const { return components_.front().dim(); }
  const std::vector<LevyExponent>& components() const { return components_; }
  const LevyExponent& component(int j) const { return components_.at(j); }

 private:
  std::vector<LevyExponent> components_;
};

}  // namespace addlevy
