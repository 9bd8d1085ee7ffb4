#include "addlevy/integrand.hpp"

#include <cmath>
#include <stdexcept>

namespace addlevy {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double chain_product(const std::vector<LevyExponent>& exps,
                     std::span<const double> point, int d) {
  // prod_{j=1..k} re_resolvent(Psi_j, xi_j - xi_{j-1}), xi_0 = xi_k = 0,
  // point = (xi_1, ..., xi_{k-1}).
  const int k = static_cast<int>(exps.size());
  thread_local std::vector<double> diff;
  diff.assign(d, 0.0);
  double prod = 1.0;
  for (int j = 0; j < k; ++j) {
    for (int c = 0; c < d; ++c) {
      double cur = (j < k - 1) ? point[j * d + c] : 0.0;
      double prev = (j > 0) ? point[(j - 1) * d + c] : 0.0;
      diff[c] = cur - prev;
    }
    prod *= exps[j].re_resolvent(diff);
  }
  return prod;
}

double block_product(const std::vector<LevyExponent>& exps,
                     std::span<const double> point, int d) {
  double prod = 1.0;
  for (std::size_t j = 0; j < exps.size(); ++j)
    prod *= exps[j].re_resolvent(point.subspan(j * d, d));
  return prod;
}

void check_block_family(const std::vector<LevyExponent>& exps, int min_k) {
  if (static_cast<int>(exps.size()) < min_k)
    throw std::invalid_argument("integrand: needs at least k = 2 exponents");
  int d = exps.front().dim();
  for (const auto& e : exps)
    if (e.dim() != d)
      throw std::invalid_argument("integrand: exponent dimensions differ");
}

}  // namespace

IntegrandSpec IntegrandSpec::range_product(AdditiveProcess process) {
  int d = process.dim();
  return IntegrandSpec(IntegrandKind::RangeProduct, d, d,
                       RangeProductData{std::move(process)});
}

IntegrandSpec IntegrandSpec::riesz_weighted(AdditiveProcess process, double beta) {
  int d = process.dim();
  if (!(beta > 0.0 && beta < d))
    throw std::invalid_argument("riesz_weighted: beta must lie in (0, d)");
  return IntegrandSpec(IntegrandKind::RieszWeighted, d, d,
                       RieszData{std::move(process), beta});
}

IntegrandSpec IntegrandSpec::multipoint_chain(std::vector<LevyExponent> exponents) {
  check_block_family(exponents, 2);
  int d = exponents.front().dim();
  int k = static_cast<int>(exponents.size());
  return IntegrandSpec(IntegrandKind::MultipointChain, d * (k - 1), d,
                       ChainData{std::move(exponents)});
}

IntegrandSpec IntegrandSpec::multipoint_dimension(std::vector<LevyExponent> exponents,
                                                  double beta) {
  check_block_family(exponents, 2);
  int d = exponents.front().dim();
  if (!(beta > 0.0 && beta < d))
    throw std::invalid_argument("multipoint_dimension: beta must lie in (0, d)");
  int k = static_cast<int>(exponents.size());
  return IntegrandSpec(IntegrandKind::MultipointDimension, d * k, d,
                       MultiDimData{std::move(exponents), beta});
}

IntegrandSpec IntegrandSpec::subordinator_intersection(LevyExponent psi1,
                                                       LevyExponent psi2) {
  if (psi1.dim() != 1 || psi2.dim() != 1)
    throw std::invalid_argument("subordinator_intersection: ambient dim must be 1");
  return IntegrandSpec(IntegrandKind::SubordinatorIntersection, 1, 1,
                       SubIntData{std::move(psi1), std::move(psi2)});
}

bool IntegrandSpec::origin_singular() const {
  return kind_ == IntegrandKind::RieszWeighted ||
         kind_ == IntegrandKind::MultipointDimension ||
         kind_ == IntegrandKind::SubordinatorIntersection;
}

double IntegrandSpec::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != domain_dim_)
    throw std::invalid_argument("IntegrandSpec: point dimension mismatch");
  switch (kind_) {
    case IntegrandKind::RangeProduct: {
      const auto& data = std::get<RangeProductData>(data_);
      double prod = 1.0;
      for (const auto& e : data.process.components()) prod *= e.re_resolvent(point);
      return prod;
    }
    case IntegrandKind::RieszWeighted: {
      const auto& data = std::get<RieszData>(data_);
      double r = norm2(point);
      if (r == 0.0) throw SingularPointError();
      double prod = 1.0;
      for (const auto& e : data.process.components()) prod *= e.re_resolvent(point);
      return std::pow(r, data.beta - ambient_dim_) * prod;
    }
    case IntegrandKind::MultipointChain: {
      const auto& data = std::get<ChainData>(data_);
      return chain_product(data.exponents, point, ambient_dim_);
    }
    case IntegrandKind::MultipointDimension: {
      const auto& data = std::get<MultiDimData>(data_);
      const int d = ambient_dim_;
      const int k = static_cast<int>(data.exponents.size());
      thread_local std::vector<double> sum;
      sum.assign(d, 0.0);
      for (int j = 0; j < k; ++j)
        for (int c = 0; c < d; ++c) sum[c] += point[j * d + c];
      double r = norm2(sum);
      if (r == 0.0) throw SingularPointError();
      return std::pow(r, data.beta - d) * block_product(data.exponents, point, d);
    }
    case IntegrandKind::SubordinatorIntersection: {
      const auto& data = std::get<SubIntData>(data_);
      Complex p1 = data.psi1(point);
      double m2 = std::norm(p1);
      if (m2 == 0.0) throw SingularPointError();
      return (p1.real() / m2) * data.psi2.re_resolvent(point);
    }
  }
  return 0.0;  // unreachable
}

double IntegrandSpec::weight_exponent() const {
  switch (kind_) {
    case IntegrandKind::RieszWeighted:
      return std::get<RieszData>(data_).beta - ambient_dim_;
    case IntegrandKind::MultipointDimension:
      return std::get<MultiDimData>(data_).beta - ambient_dim_;
    default:
      return 0.0;
  }
}

int IntegrandSpec::weight_block() const {
  switch (kind_) {
    case IntegrandKind::RieszWeighted:
      return ambient_dim_;  // whole space: weight is purely radial
    case IntegrandKind::MultipointDimension:
      return ambient_dim_;  // leading u block of the transformed coordinates
    default:
      return 0;
  }
}

double IntegrandSpec::shell_factor(std::span<const double> v) const {
  switch (kind_) {
    case IntegrandKind::RieszWeighted: {
      const auto& data = std::get<RieszData>(data_);
      double prod = 1.0;
      for (const auto& e : data.process.components()) prod *= e.re_resolvent(v);
      return prod;
    }
    case IntegrandKind::MultipointDimension: {
      // v = (u, xi_2, ..., xi_k); xi_1 = u - sum_{j>=2} xi_j. Unit Jacobian.
      const auto& data = std::get<MultiDimData>(data_);
      const int d = ambient_dim_;
      const int k = static_cast<int>(data.exponents.size());
      thread_local std::vector<double> xi1;
      xi1.assign(v.begin(), v.begin() + d);
      for (int j = 1; j < k; ++j)
        for (int c = 0; c < d; ++c) xi1[c] -= v[j * d + c];
      double prod = data.exponents[0].re_resolvent(xi1);
      for (int j = 1; j < k; ++j)
        prod *= data.exponents[j].re_resolvent(v.subspan(j * d, d));
      return prod;
    }
    default:
      return evaluate(v);
  }
}

double sector_ratio(const AdditiveProcess& process, std::span<const double> xi) {
  Complex num(1.0, 0.0);
  double den = 1.0;
  for (const auto& e : process.components()) {
    Complex p = e(xi);
    Complex resolvent = 1.0 / (1.0 + p);
    num *= resolvent;
    den *= e.re_resolvent(xi);
  }
  return num.real() / den;
}

double signed_family_sum(std::span<const Complex> z) {
  const int n = static_cast<int>(z.size());
  if (n < 1 || n > 24)
    throw std::invalid_argument("signed_family_sum: N must lie in [1, 24]");
  std::vector<Complex> w(n);
  for (int j = 0; j < n; ++j) w[j] = 1.0 / (1.0 + z[j]);
  double sum = 0.0;
  const std::uint64_t patterns = 1ull << (n - 1);
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    Complex prod = w[0];  // component 1 fixed
    for (int j = 1; j < n; ++j)
      prod *= (mask >> (j - 1)) & 1 ? std::conj(w[j]) : w[j];
    sum += prod.real();
  }
  return sum;
}

Complex conjugate_permutation_sum(std::span<const Complex> z) {
  const int n = static_cast<int>(z.size());
  if (n < 1 || n > 24)
    throw std::invalid_argument("conjugate_permutation_sum: N must lie in [1, 24]");
  std::vector<Complex> w(n);
  for (int j = 0; j < n; ++j) w[j] = 1.0 / (1.0 + z[j]);
  Complex sum(0.0, 0.0);
  const std::uint64_t patterns = 1ull << n;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    Complex prod(1.0, 0.0);
    for (int j = 0; j < n; ++j)
      prod *= (mask >> j) & 1 ? std::conj(w[j]) : w[j];
    sum += prod;
  }
  return sum;
}

std::vector<double> cyclic_transform(std::span<const double> points, int d) {
  if (d < 1 || points.size() % d != 0)
    throw std::invalid_argument("cyclic_transform: size must be a multiple of d");
  const int k = static_cast<int>(points.size()) / d;
  if (k < 2) throw std::invalid_argument("cyclic_transform: needs k >= 2 blocks");
  std::vector<double> out(points.size());
  for (int j = 1; j < k; ++j)
    for (int c = 0; c < d; ++c)
      out[(j - 1) * d + c] = points[j * d + c] - points[(j - 1) * d + c];
  for (int c = 0; c < d; ++c) out[(k - 1) * d + c] = points[(k - 1) * d + c];
  return out;
}

std::vector<double> cyclic_transform_inverse(std::span<const double> primed, int d) {
  if (d < 1 || primed.size() % d != 0)
    throw std::invalid_argument("cyclic_transform_inverse: size must be a multiple of d");
  const int k = static_cast<int>(primed.size()) / d;
  if (k < 2)
    throw std::invalid_argument("cyclic_transform_inverse: needs k >= 2 blocks");
  std::vector<double> out(primed.size());
  for (int c = 0; c < d; ++c) out[(k - 1) * d + c] = primed[(k - 1) * d + c];
  for (int j = k - 1; j >= 1; --j)
    for (int c = 0; c < d; ++c)
      out[(j - 1) * d + c] = out[j * d + c] - primed[(j - 1) * d + c];
  return out;
}

double q_window_factor(Complex z, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("q_window_factor: r must be > 0");
  Complex w = r * z;
  double wmag = std::abs(w);
  if (wmag < 1e-4) {
    // 2 Re(r^2/2 - r^3 z/6 + r^4 z^2/24 - r^5 z^3/120); truncation error
    // O((r|z|)^4) relative, ~1e-16 at the switch.
    Complex s = 1.0 - w / 3.0 + w * w / 12.0 - w * w * w / 60.0;
    return std::max(0.0, r * r * s.real());
  }
  // w_full = r z - 1 + e^{-r z}, assembled from expm1/sin^2 pieces so the
  // leading cancellation (~(rz)^2/2) keeps full relative precision.
  double a = w.real(), b = w.imag();
  double u = std::expm1(-a);
  double sin_half = std::sin(0.5 * b);
  double re_w = a + u * std::cos(b) - 2.0 * sin_half * sin_half;
  double im_w = (b - std::sin(b)) - u * std::sin(b);
  Complex q = Complex(re_w, im_w) / (z * z);
  return std::max(0.0, 2.0 * q.real());
}

double q_lambda_r(const AdditiveProcess& process, double r,
                  std::span<const double> xi) {
  double prod = 1.0;
  for (const auto& e : process.components()) prod *= q_window_factor(e(xi), r);
  return prod;
}

}  // namespace addlevy
