#include "addlevy/exponent.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "addlevy/rng.hpp"

namespace addlevy {

namespace {

constexpr double kAlphaTol = 1e-9;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

struct LevyExponent::Impl {
  int dim = 1;
  ExponentKind kind = ExponentKind::Custom;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  bool real_valued = false;
  Evaluator eval;
};

LevyExponent LevyExponent::isotropic_stable(int dim, double alpha) {
  if (dim < 1) throw std::invalid_argument("isotropic_stable: dim must be >= 1");
  if (!(alpha > kAlphaTol && alpha <= 2.0))
    throw std::invalid_argument("isotropic_stable: alpha must lie in (0, 2]");
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->kind = ExponentKind::IsotropicStable;
  impl->alpha = alpha;
  impl->real_valued = true;
  impl->eval = [alpha](std::span<const double> xi) -> Complex {
    return {std::pow(norm2(xi), alpha), 0.0};
  };
  return LevyExponent(std::move(impl));
}

LevyExponent LevyExponent::stable_subordinator(double alpha) {
  // Strict subordinators only: alpha pinned inside (0,1) with 1e-9 tolerance;
  // alpha -> 1 degenerates to pure drift.
  if (!(alpha > kAlphaTol && alpha < 1.0 - kAlphaTol))
    throw std::invalid_argument(
        "stable_subordinator: alpha must lie strictly inside (0, 1)");
  auto impl = std::make_shared<Impl>();
  impl->dim = 1;
  impl->kind = ExponentKind::StableSubordinator;
  impl->alpha = alpha;
  impl->real_valued = false;
  const double c = std::cos(std::numbers::pi * alpha / 2.0);
  const double s = std::sin(std::numbers::pi * alpha / 2.0);
  impl->eval = [alpha, c, s](std::span<const double> xi) -> Complex {
    double x = xi[0];
    if (x == 0.0) return {0.0, 0.0};
    double r = std::pow(std::abs(x), alpha);
    double sgn = x > 0.0 ? 1.0 : -1.0;
    return {r * c, -sgn * r * s};
  };
  return LevyExponent(std::move(impl));
}

LevyExponent LevyExponent::drift(std::vector<double> velocity) {
  if (velocity.empty()) throw std::invalid_argument("drift: empty velocity");
  auto impl = std::make_shared<Impl>();
  impl->dim = static_cast<int>(velocity.size());
  impl->kind = ExponentKind::Custom;
  impl->real_valued = false;
  impl->eval = [b = std::move(velocity)](std::span<const double> xi) -> Complex {
    double dot = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) dot += b[i] * xi[i];
    return {0.0, -dot};
  };
  return LevyExponent(std::move(impl));
}

LevyExponent LevyExponent::constant(int dim) {
  if (dim < 1) throw std::invalid_argument("constant: dim must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->kind = ExponentKind::Custom;
  impl->real_valued = true;
  impl->eval = [](std::span<const double>) -> Complex { return {0.0, 0.0}; };
  return LevyExponent(std::move(impl));
}

LevyExponent LevyExponent::custom(int dim, Evaluator f, CustomOptions opts) {
  if (dim < 1) throw std::invalid_argument("custom: dim must be >= 1");
  if (!f) throw std::invalid_argument("custom: empty evaluator");

  // Spot-check the exponent invariants on a fixed seeded cloud spanning
  // ~10 dyadic scales. Failures abort construction.
  std::vector<double> zero(dim, 0.0);
  Complex at0 = f(zero);
  if (std::abs(at0) > 1e-12)
    throw std::invalid_argument("custom exponent: Psi(0) != 0");

  rng::Stream stream(0x00c0ffee, 0x5afe);
  std::vector<double> point(dim), neg(dim);
  for (int i = 0; i < opts.check_points; ++i) {
    double scale = std::exp2((i % 21) - 10);
    for (int j = 0; j < dim; ++j) {
      point[j] = scale * stream.gaussian();
      neg[j] = -point[j];
    }
    Complex v = f(point);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("custom exponent: non-finite value");
    double mag = std::abs(v);
    if (v.real() < -1e-9 * std::max(1.0, mag))
      throw std::invalid_argument("custom exponent: Re Psi < 0 at a sampled point");
    if (opts.enforce_hermitian) {
      Complex w = f(neg);
      if (std::abs(w - std::conj(v)) > 1e-9 * std::max(1.0, mag)) {
        std::ostringstream msg;
        msg << "custom exponent: Hermitian symmetry violated (|Psi(-x) - conj(Psi(x))| = "
            << std::abs(w - std::conj(v)) << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }

  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->kind = ExponentKind::Custom;
  impl->eval = std::move(f);
  return LevyExponent(std::move(impl));
}

Complex LevyExponent::operator()(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != impl_->dim)
    throw std::invalid_argument("LevyExponent: argument dimension mismatch");
  return impl_->eval(xi);
}

double LevyExponent::re_resolvent(std::span<const double> xi) const {
  Complex p = (*this)(xi);
  double re1 = 1.0 + p.real();
  double den = re1 * re1 + p.imag() * p.imag();
  return re1 / den;
}

LevyExponent LevyExponent::conjugate() const {
  if (impl_->real_valued) return *this;
  auto impl = std::make_shared<Impl>();
  impl->dim = impl_->dim;
  impl->kind = ExponentKind::Conjugated;
  impl->alpha = impl_->alpha;
  impl->real_valued = false;
  impl->eval = [inner = impl_](std::span<const double> xi) -> Complex {
    return std::conj(inner->eval(xi));
  };
  return LevyExponent(std::move(impl));
}

LevyExponent LevyExponent::pair_difference() const {
  auto impl = std::make_shared<Impl>();
  const int d = impl_->dim;
  impl->dim = 2 * d;
  impl->kind = ExponentKind::Custom;
  impl->real_valued = impl_->real_valued;
  impl->eval = [inner = impl_, d](std::span<const double> xi) -> Complex {
    std::vector<double> diff(d);
    for (int j = 0; j < d; ++j) diff[j] = xi[j] - xi[d + j];
    return inner->eval(diff);
  };
  return LevyExponent(std::move(impl));
}

int LevyExponent::dim() const { return impl_->dim; }
ExponentKind LevyExponent::kind() const { return impl_->kind; }
double LevyExponent::alpha() const { return impl_->alpha; }
bool LevyExponent::real_valued() const { return impl_->real_valued; }

AdditiveProcess::AdditiveProcess(std::vector<LevyExponent> components)
    : components_(std::move(components)) {
  if (components_.empty())
    throw std::invalid_argument("AdditiveProcess: needs at least one component");
  int d = components_.front().dim();
  for (const auto& c : components_)
    if (c.dim() != d)
      throw std::invalid_argument("AdditiveProcess: component dimensions differ");
}

}  // namespace addlevy
