#pragma once

#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "addlevy/exponent.hpp"

namespace addlevy {

/// Thrown when an integrand is evaluated exactly on its singular locus
/// (|xi| = 0 under a negative radial weight, or Psi_1(x) = 0 in the
/// subordinator-intersection integrand). Samplers draw from continuous
/// distributions, so hitting the locus has probability zero; the shell
/// integrator resamples on this signal.
struct SingularPointError : std::domain_error {
  SingularPointError() : std::domain_error("integrand evaluated on singular locus") {}
};

enum class IntegrandKind {
  RangeProduct,
  RieszWeighted,
  MultipointChain,
  MultipointDimension,
  SubordinatorIntersection,
};

/// One of the five decision integrands, as a nonnegative evaluatable function
/// with a declared domain dimension.
///
/// Raw-coordinate forms (evaluate):
///   RangeProduct             prod_j Re(1/(1+Psi_j(xi)))                 on R^d
///   RieszWeighted(beta)      |xi|^(beta-d) * RangeProduct(xi)           on R^d
///   MultipointChain(k)       prod_{j=1..k} Re(1/(1+Psi_j(xi_j-xi_{j-1})))
///                            with xi_0 = xi_k = 0                       on R^(d(k-1))
///   MultipointDimension(k,b) |sum_j xi_j|^(beta-d) prod_j Re(1/(1+Psi_j(xi_j)))
///                                                                       on R^(dk)
///   SubordinatorIntersection Re(1/Psi_1(x)) Re(1/(1+Psi_2(x)))          on R
///
/// For sampling, an integrand is decomposed as |leading u block|^gamma *
/// shell_factor(v) in sampling coordinates: MultipointDimension is sampled in
/// the unit-Jacobian coordinates v = (u, xi_2, ..., xi_k) with u = sum_j xi_j,
/// which turns its singular hyperplane into a radial weight on the leading
/// d coordinates.
class IntegrandSpec {
 public:
  static IntegrandSpec range_product(AdditiveProcess process);
  static IntegrandSpec riesz_weighted(AdditiveProcess process, double beta);
  static IntegrandSpec multipoint_chain(std::vector<LevyExponent> exponents);
  static IntegrandSpec multipoint_dimension(std::vector<LevyExponent> exponents,
                                            double beta);
  static IntegrandSpec subordinator_intersection(LevyExponent psi1, LevyExponent psi2);

  IntegrandKind kind() const { return kind_; }
  int domain_dim() const { return domain_dim_; }
  /// Ambient dimension d of the underlying exponents.
  int ambient_dim() const { return ambient_dim_; }
  /// True for kinds whose integral needs an origin-side decay analysis.
  bool origin_singular() const;

  /// Full integrand in raw coordinates; >= 0, throws SingularPointError on
  /// the singular locus.
  double evaluate(std::span<const double> point) const;
  double evaluate(std::initializer_list<double> point) const {
    return evaluate(std::span<const double>(point.begin(), point.size()));
  }

  /// Sampling decomposition: integrand(v) = |v[0..weight_block)|^weight_exponent
  /// * shell_factor(v) in sampling coordinates. weight_block == 0 means no
  /// analytic weight (shell_factor is the whole integrand, raw coordinates).
  double weight_exponent() const;
  int weight_block() const;
  double shell_factor(std::span<const double> v) const;

 private:
  struct RangeProductData {
    AdditiveProcess process;
  };
  struct RieszData {
    AdditiveProcess process;
    double beta;
  };
  struct ChainData {
    std::vector<LevyExponent> exponents;
  };
  struct MultiDimData {
    std::vector<LevyExponent> exponents;
    double beta;
  };
  struct SubIntData {
    LevyExponent psi1, psi2;
  };
  using Data =
      std::variant<RangeProductData, RieszData, ChainData, MultiDimData, SubIntData>;

  IntegrandSpec(IntegrandKind kind, int domain_dim, int ambient_dim, Data data)
      : kind_(kind), domain_dim_(domain_dim), ambient_dim_(ambient_dim),
        data_(std::move(data)) {}

  IntegrandKind kind_;
  int domain_dim_;
  int ambient_dim_;
  Data data_;
};

/// Re(prod_j 1/(1+Psi_j(xi))) / prod_j Re(1/(1+Psi_j(xi))). Equals 1 for
/// real-valued or single-component processes; can be negative, which is the
/// sector-condition failure mode.
double sector_ratio(const AdditiveProcess& process, std::span<const double> xi);

/// Sum over the 2^(N-1) sign patterns (component 1 fixed, components 2..N
/// optionally conjugated) of Re(prod_j 1/(1+z_j^{+-})). Identity:
/// equals 2^(N-1) prod_j Re(1/(1+z_j)).
double signed_family_sum(std::span<const Complex> z);

/// Sum over all 2^N conjugation patterns of prod_j 1/(1+z_j^{+-}).
/// Identity: equals 2^N prod_j Re(1/(1+z_j)) (real and positive).
Complex conjugate_permutation_sum(std::span<const Complex> z);

/// Volume-preserving change of variables on R^(dk): given (xi_0,...,xi_{k-1})
/// returns (xi'_1,...,xi'_k) with xi'_j = xi_j - xi_{j-1} for j < k and
/// xi'_k = xi_{k-1}.
std::vector<double> cyclic_transform(std::span<const double> points, int d);
/// Exact inverse of cyclic_transform.
std::vector<double> cyclic_transform_inverse(std::span<const double> primed, int d);

/// Single-component factor of Q_{lambda^r}: the double time integral
/// q(z, r) = int_0^r int_0^r exp(-|t-s| z(sgn(t-s))) dt ds
///         = 2 Re( (r z - 1 + e^{-r z}) / z^2 ),
/// with the limit r^2 at z = 0. Switches to a 4-term Taylor series for
/// r|z| < 1e-4 (the direct form cancels catastrophically there).
double q_window_factor(Complex z, double r);

/// Q_{lambda^r}(xi) = prod_j q_window_factor(Psi_j(xi), r); lambda^r is the
/// N-fold product measure, hence the factorization. Bounded by r^(2N).
double q_lambda_r(const AdditiveProcess& process, double r, std::span<const double> xi);

}  // namespace addlevy
