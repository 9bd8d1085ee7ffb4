#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "addlevy/integrand.hpp"
#include "addlevy/rng.hpp"

namespace addlevy::quadrature {

/// One point drawn log-uniform in radius x uniform on the sphere from the
/// dyadic shell {2^m <= |x| < 2^(m+1)} in the given dimension.
void sample_shell_point(int dim, int m, rng::Stream& stream, std::span<double> out);

/// Integrand handed to the shell sampler, decomposed as
///   f(v) = |v[0..weight_block)|^weight_exponent * fn(v)
/// with fn finite on every shell. weight_block == 0 means fn is the whole
/// integrand. The weight is absorbed analytically: purely radial weights
/// (weight_block == dim) rescale the radius factor; partial-block weights
/// tilt the direction-split distribution (Beta(((block+exponent)/2), rest/2))
/// so the estimator stays bounded on the shell.
struct ShellIntegrand {
  int dim = 1;
  double weight_exponent = 0.0;
  int weight_block = 0;
  std::function<double(std::span<const double>)> fn;

  static ShellIntegrand from_spec(const IntegrandSpec& spec);
};

struct ShellEstimate {
  double mass = 0.0;
  double stderr_ = 0.0;
};

struct ShellRow {
  int m = 0;
  double mass = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
};

/// Per-shell masses A_m ~ integral over {2^m <= |x| < 2^(m+1)}.
struct ShellTable {
  int m_min = 0;
  int m_max = 0;
  std::uint64_t seed = 0;
  std::vector<ShellRow> rows;  // ascending m

  double total_mass() const;
  void write_csv(std::ostream& out) const;  // columns: m,mass,stderr,samples
};

/// Least-squares fit of log2(A_m) against m over a shell-index window.
struct DecayEstimate {
  double slope = 0.0;
  double residual = 0.0;      // RMS of the linear fit
  double slope_stderr = 0.0;
  int window_lo = 0;
  int window_hi = 0;
  bool valid = false;
};

enum class Verdict { Converges, Diverges, Critical };

const char* to_string(Verdict v);

struct QuadratureOptions {
  int m_min = -20;
  int m_max = 40;
  int window = 10;            // shells per decay fit
  int samples_per_shell = 4096;
  std::uint64_t seed = 0x00add1e5ull;
  double slope_margin = 0.05;     // epsilon in the verdict rule
  double residual_ok = 0.1;       // max fit residual for Converges
  double residual_critical = 0.5; // beyond this the table is non-power-law
  int threads = 0;                // 0 = auto; result independent of choice
};

struct ConvergenceVerdict {
  Verdict verdict = Verdict::Critical;
  DecayEstimate tail;
  std::optional<DecayEstimate> origin;  // present for origin-singular integrands
  std::optional<double> value;          // tail-extrapolated integral if Converges
  ShellTable table;
  std::vector<std::string> diagnostics;
};

/// Monte Carlo estimate of the integral over shell m, points drawn
/// log-uniform in radius x uniform on the sphere, deterministic given seed.
/// Retries up to 16 times per point on a singular-locus signal.
ShellEstimate shell_mass(const ShellIntegrand& form, int m, int samples,
                         std::uint64_t seed);
ShellEstimate shell_mass(const IntegrandSpec& spec, int m, int samples,
                         std::uint64_t seed);

DecayEstimate fit_decay(const ShellTable& table, int window_lo, int window_hi);

/// Shell-table construction plus the margin-rule verdict:
///   Converges  iff slope_tail <= -eps (and, when origin analysis applies,
///              slope_origin >= +eps) with fit residuals < residual_ok;
///   Diverges   iff slope_tail >= +eps or the origin side diverges;
///   Critical   otherwise (including non-power-law tables, residual > 0.5).
/// When Converges, value = sum of shell masses + geometric tail
/// extrapolation A_max * 2^slope / (1 - 2^slope).
ConvergenceVerdict decide_convergence(const ShellIntegrand& form, bool origin_side,
                                      const QuadratureOptions& opts = {});
ConvergenceVerdict decide_convergence(const IntegrandSpec& spec,
                                      const QuadratureOptions& opts = {});

}  // namespace addlevy::quadrature
