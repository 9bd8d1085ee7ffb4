#include "addlevy/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <array>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "addlevy/detail/parallel.hpp"
#include "addlevy/rng.hpp"

namespace addlevy::simulate {

namespace {

constexpr std::uint64_t kOccupationTag = 0x0cc0'0000;
constexpr std::uint64_t kRangeTag = 0x4a9e'0000;
constexpr std::int64_t kMaxLatticePoints = 1 << 24;
constexpr std::int64_t kMaxVoxelIndex = 1 << 20;

void validate_component(const SimComponent& c, int d) {
  switch (c.family) {
    case Family::Brownian:
    case Family::Constant:
      return;
    case Family::IsotropicStable:
      if (!(c.alpha > 0.0 && c.alpha <= 2.0))
        throw std::invalid_argument("simulate: isotropic stable alpha must be in (0,2]");
      return;
    case Family::StableSubordinator:
      if (d != 1)
        throw std::invalid_argument("simulate: stable subordinator requires d = 1");
      if (!(c.alpha > 0.0 && c.alpha < 1.0))
        throw std::invalid_argument("simulate: subordinator alpha must be in (0,1)");
      return;
  }
  throw std::invalid_argument("simulate: unsupported family");
}

void validate_config(const SimulationConfig& config) {
  if (config.d < 1) throw std::invalid_argument("simulate: d must be >= 1");
  if (config.components.empty())
    throw std::invalid_argument("simulate: at least one component required");
  if (!(config.h > 0.0)) throw std::invalid_argument("simulate: h must be > 0");
  if (config.replicates < 1)
    throw std::invalid_argument("simulate: replicates must be >= 1");
  if (!(config.voxel_delta > 0.0))
    throw std::invalid_argument("simulate: voxel_delta must be > 0");
  for (const auto& c : config.components) validate_component(c, config.d);
}

void fill_increments(Family family, double alpha, int d, double t_step, int count,
                     rng::Stream& stream, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(count) * d, 0.0);
  switch (family) {
    case Family::Constant:
      return;
    case Family::Brownian: {
      double sd = std::sqrt(2.0 * t_step);
      for (double& v : out) v = sd * stream.gaussian();
      return;
    }
    case Family::StableSubordinator: {
      double scale = std::pow(t_step, 1.0 / alpha);
      for (int i = 0; i < count; ++i) out[i] = scale * stream.positive_stable(alpha);
      return;
    }
    case Family::IsotropicStable: {
      if (alpha >= 2.0) {  // Gaussian endpoint of the family
        double sd = std::sqrt(2.0 * t_step);
        for (double& v : out) v = sd * stream.gaussian();
        return;
      }
      // X = B_{2S}: S an (alpha/2)-stable subordinator increment over t_step,
      // B standard; gives E e^{i xi X} = e^{-t |xi|^alpha} exactly.
      double scale = std::pow(t_step, 2.0 / alpha);
      for (int i = 0; i < count; ++i) {
        double s = scale * stream.positive_stable(alpha / 2.0);
        double sd = std::sqrt(2.0 * s);
        for (int c = 0; c < d; ++c) out[i * d + c] = sd * stream.gaussian();
      }
      return;
    }
  }
}

/// Positions on the grid {0, h, ..., count*h}: count+1 points, prefix sums.
std::vector<double> path_positions(Family family, double alpha, int d, double h,
                                   int steps, rng::Stream& stream) {
  std::vector<double> incr;
  fill_increments(family, alpha, d, h, steps, stream, incr);
  std::vector<double> pos(static_cast<std::size_t>(steps + 1) * d, 0.0);
  for (int i = 0; i < steps; ++i)
    for (int c = 0; c < d; ++c)
      pos[(i + 1) * d + c] = pos[i * d + c] + incr[i * d + c];
  return pos;
}

std::int64_t checked_lattice_points(std::int64_t per_axis, int n) {
  std::int64_t total = 1;
  for (int j = 0; j < n; ++j) {
    if (total > kMaxLatticePoints / per_axis)
      throw std::runtime_error(
          "simulate: lattice too large; use a coarser mesh (resource guard)");
    total *= per_axis;
  }
  return total;
}

struct VoxelKey {
  std::uint64_t key;
};

// Nonnegative grid indices (box counting): idx[c] in [0, 2^21).
std::uint64_t pack_box(const std::int64_t idx[3], int d) {
  std::uint64_t key = 0;
  for (int c = 0; c < d; ++c)
    key = (key << 21) | (static_cast<std::uint64_t>(idx[c]) & 0x1fffffull);
  return key;
}

std::uint64_t pack_voxel(const std::int64_t idx[3], int d) {
  std::uint64_t key = 0;
  for (int c = 0; c < d; ++c) {
    if (idx[c] > kMaxVoxelIndex || idx[c] < -kMaxVoxelIndex)
      throw std::runtime_error(
          "simulate: voxel index overflow; increase voxel_delta");
    key = (key << 21) | (static_cast<std::uint64_t>(idx[c] + kMaxVoxelIndex) &
                         0x1fffffull);
  }
  return key;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::Brownian: return "brownian";
    case Family::IsotropicStable: return "isotropic_stable";
    case Family::StableSubordinator: return "stable_subordinator";
    case Family::Constant: return "constant";
  }
  return "?";
}

AdditiveProcess to_process(const SimulationConfig& config) {
  validate_config(config);
  std::vector<LevyExponent> comps;
  comps.reserve(config.components.size());
  for (const auto& c : config.components) {
    switch (c.family) {
      case Family::Brownian:
        comps.push_back(LevyExponent::isotropic_stable(config.d, 2.0));
        break;
      case Family::IsotropicStable:
        comps.push_back(LevyExponent::isotropic_stable(config.d, c.alpha));
        break;
      case Family::StableSubordinator:
        comps.push_back(LevyExponent::stable_subordinator(c.alpha));
        break;
      case Family::Constant:
        comps.push_back(LevyExponent::constant(config.d));
        break;
    }
  }
  return AdditiveProcess(std::move(comps));
}

std::vector<double> sample_increments(Family family, double alpha, int d,
                                      double t_step, int count,
                                      std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("sample_increments: d must be >= 1");
  if (count < 0) throw std::invalid_argument("sample_increments: negative count");
  if (!(t_step > 0.0))
    throw std::invalid_argument("sample_increments: t_step must be > 0");
  validate_component({family, alpha}, d);
  rng::Stream stream(seed, 0x1c4e);
  std::vector<double> out;
  fill_increments(family, alpha, d, t_step, count, stream, out);
  return out;
}

OccupationSample occupation_fourier(const SimulationConfig& config,
                                    std::vector<double> xi) {
  validate_config(config);
  if (static_cast<int>(xi.size()) != config.d)
    throw std::invalid_argument("occupation_fourier: xi dimension mismatch");
  if (config.t_kill < 5.0)
    throw std::invalid_argument("occupation_fourier: t_kill must be >= 5");

  const int n = config.n_params();
  const int d = config.d;
  const double h = config.h;
  const int steps = static_cast<int>(std::floor(config.t_kill / h + 0.5));
  checked_lattice_points(steps, n);

  // Killing weights: exact per-cell mass of e^{-t} dt on [t_i, t_i + h),
  // path evaluated at the left endpoint. Total weight per axis is exactly
  // 1 - e^{-steps h}.
  const double cell = -std::expm1(-h);  // 1 - e^{-h}
  std::vector<double> kill_weight(steps);
  for (int i = 0; i < steps; ++i) kill_weight[i] = std::exp(-i * h) * cell;

  const AdditiveProcess process = to_process(config);
  std::vector<double> per_replicate(config.replicates, 0.0);
  detail::parallel_for(config.replicates, config.threads, [&](int rep) {
    // Per-axis phase sums c_j[i] = e^{i xi . X^j_{t_i}} w_i; the lattice sum
    // over the N-dim grid is evaluated by direct summation (N <= 3 typical;
    // larger N guarded by the lattice-size limit).
    std::vector<std::vector<std::complex<double>>> axis_terms(n);
    for (int j = 0; j < n; ++j) {
      rng::Stream stream(config.seed, kOccupationTag + static_cast<std::uint64_t>(rep),
                         static_cast<std::uint64_t>(j));
      const auto& comp = config.components[j];
      std::vector<double> pos =
          path_positions(comp.family, comp.alpha, d, h, steps - 1, stream);
      auto& terms = axis_terms[j];
      terms.resize(steps);
      for (int i = 0; i < steps; ++i) {
        double phase = 0.0;
        for (int c = 0; c < d; ++c) phase += xi[c] * pos[i * d + c];
        terms[i] = std::polar(kill_weight[i], phase);
      }
    }
    // Odometer over the lattice, innermost axis contiguous.
    std::complex<double> total(0.0, 0.0);
    std::vector<int> index(n, 0);
    std::vector<std::complex<double>> prefix(n + 1);
    prefix[0] = {1.0, 0.0};
    for (;;) {
      for (int j = 0; j < n; ++j) prefix[j + 1] = prefix[j] * axis_terms[j][index[j]];
      total += prefix[n];
      int axis = n - 1;
      while (axis >= 0 && ++index[axis] == steps) {
        index[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
    per_replicate[rep] = std::norm(total);
  });

  OccupationSample out;
  out.xi = std::move(xi);
  out.h = h;
  out.t_kill = steps * h;
  out.replicates = config.replicates;
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < config.replicates; ++i) {
    double delta = per_replicate[i] - mean;
    mean += delta / (i + 1);
    m2 += delta * (per_replicate[i] - mean);
  }
  out.estimate = mean;
  out.stderr_ = config.replicates > 1
                    ? std::sqrt(m2 / (config.replicates - 1) / config.replicates)
                    : 0.0;
  out.per_replicate = std::move(per_replicate);
  double analytic = 1.0;
  for (const auto& e : process.components()) analytic *= e.re_resolvent(out.xi);
  out.analytic = analytic;
  return out;
}

RangeVolumeEstimate range_volume(const SimulationConfig& config) {
  validate_config(config);
  if (config.d > 3)
    throw std::invalid_argument("range_volume: voxelization supports d <= 3");
  const int n = config.n_params();
  const int d = config.d;
  const int steps = static_cast<int>(std::floor(config.r / config.h + 0.5));
  if (steps < 1 || std::abs(steps * config.h - config.r) > 4e-15 * config.r)
    throw std::invalid_argument("range_volume: h must divide r");
  checked_lattice_points(steps + 1, n);

  const double delta = config.voxel_delta;
  std::vector<double> volumes(config.replicates, 0.0);
  detail::parallel_for(config.replicates, config.threads, [&](int rep) {
    std::vector<std::vector<double>> axis_pos(n);
    for (int j = 0; j < n; ++j) {
      // One stream per (replicate, axis): growing r extends each axis path
      // without reshuffling the others, so volumes are monotone in r at a
      // fixed seed.
      rng::Stream stream(config.seed, kRangeTag + static_cast<std::uint64_t>(rep),
                         static_cast<std::uint64_t>(j));
      const auto& comp = config.components[j];
      axis_pos[j] =
          path_positions(comp.family, comp.alpha, d, config.h, steps, stream);
    }
    std::unordered_set<std::uint64_t> voxels;
    std::vector<int> index(n, 0);
    double point[3];
    std::int64_t vox[3];
    for (;;) {
      for (int c = 0; c < d; ++c) point[c] = 0.0;
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < d; ++c) point[c] += axis_pos[j][index[j] * d + c];
      for (int c = 0; c < d; ++c)
        vox[c] = static_cast<std::int64_t>(std::floor(point[c] / delta));
      voxels.insert(pack_voxel(vox, d));
      int axis = n - 1;
      while (axis >= 0 && ++index[axis] == steps + 1) {
        index[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
    volumes[rep] = static_cast<double>(voxels.size()) * std::pow(delta, d);
  });

  RangeVolumeEstimate out;
  out.replicates = config.replicates;
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < config.replicates; ++i) {
    double dlt = volumes[i] - mean;
    mean += dlt / (i + 1);
    m2 += dlt * (volumes[i] - mean);
  }
  out.volume = mean;
  out.stderr_ = config.replicates > 1
                    ? std::sqrt(m2 / (config.replicates - 1) / config.replicates)
                    : 0.0;
  out.per_replicate = std::move(volumes);
  return out;
}

BoxDimensionEstimate box_counting_dimension(const SimulationConfig& config) {
  validate_config(config);
  if (config.d > 3)
    throw std::invalid_argument("box_counting_dimension: supports d <= 3");
  const int n = config.n_params();
  const int d = config.d;
  const int steps = static_cast<int>(std::floor(config.r / config.h + 0.5));
  if (steps < 1 || std::abs(steps * config.h - config.r) > 4e-15 * config.r)
    throw std::invalid_argument("box_counting_dimension: h must divide r");
  const std::int64_t lattice = checked_lattice_points(steps + 1, n);

  constexpr int kLevels = 21;  // finest grid index < 2^21 fits the box key
  const std::int64_t points_per_rep = lattice;

  // Count boxes per replicate on the replicate's own bounding box; averaging
  // log-counts across replicates keeps the scale grid inside each path's own
  // bulk (pooling far-apart heavy-tailed paths would waste levels on the gap
  // between them).
  std::vector<std::array<double, kLevels>> rep_logcounts(config.replicates);
  detail::parallel_for(config.replicates, config.threads, [&](int rep) {
    std::vector<std::vector<double>> axis_pos(n);
    for (int j = 0; j < n; ++j) {
      rng::Stream stream(config.seed, kRangeTag + static_cast<std::uint64_t>(rep),
                         static_cast<std::uint64_t>(j));
      const auto& comp = config.components[j];
      axis_pos[j] =
          path_positions(comp.family, comp.alpha, d, config.h, steps, stream);
    }
    std::vector<double> points;
    points.reserve(static_cast<std::size_t>(points_per_rep) * d);
    std::vector<int> index(n, 0);
    for (;;) {
      for (int c = 0; c < d; ++c) {
        double x = 0.0;
        for (int j = 0; j < n; ++j) x += axis_pos[j][index[j] * d + c];
        points.push_back(x);
      }
      int axis = n - 1;
      while (axis >= 0 && ++index[axis] == steps + 1) {
        index[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }

    double lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
    for (int c = 0; c < d; ++c) lo[c] = hi[c] = points[c];
    for (std::int64_t i = 0; i < points_per_rep; ++i)
      for (int c = 0; c < d; ++c) {
        lo[c] = std::min(lo[c], points[i * d + c]);
        hi[c] = std::max(hi[c], points[i * d + c]);
      }
    double span = 0.0;
    for (int c = 0; c < d; ++c) span = std::max(span, hi[c] - lo[c]);
    if (span == 0.0) {
      rep_logcounts[rep].fill(0.0);  // single point at every level
      return;
    }
    std::unordered_set<std::uint64_t> boxes;
    std::int64_t vox[3];
    for (int level = 0; level < kLevels; ++level) {
      double delta = span * std::exp2(-level);
      boxes.clear();
      for (std::int64_t i = 0; i < points_per_rep; ++i) {
        for (int c = 0; c < d; ++c) {
          vox[c] = static_cast<std::int64_t>(
              std::floor((points[i * d + c] - lo[c]) / delta));
          vox[c] = std::clamp<std::int64_t>(vox[c], 0, (1 << level));
        }
        boxes.insert(pack_box(vox, d));
      }
      rep_logcounts[rep][level] = std::log2(static_cast<double>(boxes.size()));
      if (static_cast<std::int64_t>(boxes.size()) > points_per_rep / 8) {
        for (int rest = level + 1; rest < kLevels; ++rest)
          rep_logcounts[rep][rest] =
              std::numeric_limits<double>::quiet_NaN();  // saturated, skip
        break;
      }
    }
  });

  // Mean log-count per level over replicates that reached the level.
  std::vector<double> xs, ys;
  double max_mean_count = 0.0;
  const double usable_lo = std::log2(32.0);
  const double usable_hi = std::log2(static_cast<double>(points_per_rep) / 32.0);
  for (int level = 0; level < kLevels; ++level) {
    double sum = 0.0;
    int have = 0;
    for (int rep = 0; rep < config.replicates; ++rep) {
      double v = rep_logcounts[rep][level];
      if (!std::isnan(v)) {
        sum += v;
        ++have;
      }
    }
    if (have < config.replicates) continue;
    double mean_log = sum / have;
    max_mean_count = std::max(max_mean_count, std::exp2(mean_log));
    if (mean_log >= usable_lo && mean_log <= usable_hi) {
      xs.push_back(level);
      ys.push_back(mean_log);
    }
  }

  BoxDimensionEstimate out;
  if (xs.size() < 4) {
    if (max_mean_count <= 2.0) return out;  // degenerate path: dimension 0
    throw std::runtime_error(
        "box_counting_dimension: fewer than 4 usable levels; refine the mesh "
        "or add replicates");
  }

  const int m = static_cast<int>(xs.size());
  out.levels_used = m;

  // Consecutive-level increments regressed on 1/level: boundary cases
  // (box counts ~ delta^-D / ln(1/delta)) show a 1/level term whose removal
  // recovers D; for clean power laws the fitted coefficient is ~0 and the
  // estimate reduces to the window slope.
  std::vector<double> u, incr;
  for (int i = 1; i < m; ++i)
    if (xs[i] == xs[i - 1] + 1.0) {
      incr.push_back(ys[i] - ys[i - 1]);
      u.push_back(1.0 / xs[i]);
    }
  const int q = static_cast<int>(incr.size());
  double u_spread = 0.0;
  if (q > 0)
    u_spread = *std::max_element(u.begin(), u.end()) -
               *std::min_element(u.begin(), u.end());

  if (q >= 5 && u_spread >= 0.04) {
    double mu = 0, mi = 0;
    for (int i = 0; i < q; ++i) {
      mu += u[i];
      mi += incr[i];
    }
    mu /= q;
    mi /= q;
    double suu = 0, sui = 0;
    for (int i = 0; i < q; ++i) {
      suu += (u[i] - mu) * (u[i] - mu);
      sui += (u[i] - mu) * (incr[i] - mi);
    }
    double a = std::clamp(-sui / suu, 0.0, 3.0);
    out.dim = mi + a * mu;
    out.curvature_correction = a;
    double ssr = 0;
    for (int i = 0; i < q; ++i) {
      double r = incr[i] - (out.dim - a * u[i]);
      ssr += r * r;
    }
    out.residual = std::sqrt(ssr / q);
    out.dim_stderr = q > 2 ? std::sqrt(ssr / (q - 2) / q) : 0.0;
    return out;
  }

  // Plain least-squares slope over the usable window.
  double mx = 0, my = 0;
  for (int i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.dim = sxy / sxx;
  double intercept = my - out.dim * mx;
  double ssr = 0;
  for (int i = 0; i < m; ++i) {
    double r = ys[i] - (intercept + out.dim * xs[i]);
    ssr += r * r;
  }
  out.residual = std::sqrt(ssr / m);
  out.dim_stderr = m > 2 ? std::sqrt(ssr / (m - 2) / sxx) : 0.0;
  return out;
}

}  // namespace addlevy::simulate
