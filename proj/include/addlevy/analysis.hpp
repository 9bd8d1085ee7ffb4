#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "addlevy/quadrature.hpp"

namespace addlevy::analysis {

using quadrature::ConvergenceVerdict;
using quadrature::QuadratureOptions;
using quadrature::Verdict;

/// Verdict for one of the strict finiteness criteria plus the standing
/// hypotheses the underlying theorem assumes but this tool does not verify.
/// Criterion mapping: Converges => criterion holds; Diverges and Critical
/// => criterion fails, Critical additionally flagged as a boundary case.
struct CriterionVerdict {
  ConvergenceVerdict decision;
  std::vector<std::string> assumptions;
  bool criterion_holds() const { return decision.verdict == Verdict::Converges; }
};

inline constexpr const char* kPotentialDensityAssumption =
    "assumes an a.e. positive q-potential density for the associated additive "
    "process (standing hypothesis, not verified numerically)";

/// E{lambda_d(X(R^N_+))} > 0 iff the range-product integral converges.
CriterionVerdict range_positivity(const AdditiveProcess& process,
                                  const QuadratureOptions& opts = {});

/// (2 pi)^-d times a convergent range-product integral: the point-mass energy
/// whose finiteness is equivalent to range positivity.
double point_mass_energy(double range_integral, int d);

struct AnalysisOptions {
  QuadratureOptions quad;
  double beta_tol = 0.05;  // bisection bracket target
};

enum class DimensionMethod { SlopeDirect, Bisection };

struct DimensionResult {
  double dim = 0.0;                 // selected estimate, in [0, d]
  DimensionMethod method = DimensionMethod::SlopeDirect;
  double critical_beta = 0.0;       // bisection estimate of the critical beta
  double slope_estimate = 0.0;      // tail-slope estimate of the dimension
  double uncertainty = 0.0;         // >= bisection bracket width
  std::vector<std::pair<double, Verdict>> trail;  // probed (beta, verdict)
  std::vector<std::string> flags;
  quadrature::ShellTable base_table;  // table behind the slope estimate
  bool flagged() const { return !flags.empty(); }
};

/// dim_H X(R^N_+) = sup{beta in (0,d) : Riesz-weighted integral converges}.
/// Primary method: tail slope sigma of the unweighted shell masses gives
/// dim = clamp(d - sigma, 0, d); cross-checked by bisection on beta. The two
/// must agree within 2*beta_tol or the result is flagged.
DimensionResult hausdorff_dimension_range(const AdditiveProcess& process,
                                          const AnalysisOptions& opts = {});

/// k-multiple points exist (positive probability) iff the chain integral over
/// R^(d(k-1)) converges. k = exponents.size() >= 2.
CriterionVerdict multiple_points_exist(const std::vector<LevyExponent>& exponents,
                                       const QuadratureOptions& opts = {});

/// Hausdorff dimension of the k-fold intersection set, solved on the
/// sum-weighted integrand over R^(dk) in cyclic-transformed coordinates.
/// Meaningful when multiple_points_exist converges.
DimensionResult multipoint_dimension(const std::vector<LevyExponent>& exponents,
                                     const AnalysisOptions& opts = {});

/// Ranges of two independent subordinators intersect (positive probability)
/// iff the product integrand with the 1/Psi_1 factor is integrable; both the
/// tail and the origin decay are analyzed. An origin-side divergence is
/// reported as Diverges with a "transience check failed" diagnostic.
CriterionVerdict subordinator_intersection(const LevyExponent& psi1,
                                           const LevyExponent& psi2,
                                           const QuadratureOptions& opts = {});

/// Scale of E{lambda_d(X([0,r]^N))} from the two-sided bracketing by
/// 1/int Q_{lambda^r}: both bounds are proportional to the reciprocal with
/// unknown constants, so lower_scale == upper_scale == 1/int Q. Divergent
/// integral (e.g. Psi == 0) yields scale 0.
struct RangeScale {
  Verdict verdict = Verdict::Critical;
  double q_integral = 0.0;
  double lower_scale = 0.0;
  double upper_scale = 0.0;
  std::vector<std::string> diagnostics;
};
RangeScale expected_range_scale(const AdditiveProcess& process, double r,
                                const QuadratureOptions& opts = {});

/// Closed-form answers for isotropic stable families (test oracle):
/// range positive iff alpha N > d (strict); dim range = min(d, alpha N);
/// k-multiple points iff d(k-1) < alpha k; their dimension = d - k(d - alpha)
/// clamped to [0, d].
struct StableOracle {
  bool range_positive = false;
  double dim_range = 0.0;
  std::optional<bool> multipoints;
  std::optional<double> dim_multipoints;
};
StableOracle stable_oracle(double alpha, int n_params, int d,
                           std::optional<int> k = std::nullopt);

}  // namespace addlevy::analysis
