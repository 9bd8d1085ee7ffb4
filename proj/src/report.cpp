#include "addlevy/report.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace addlevy::report {

Json to_json(const quadrature::DecayEstimate& est) {
  Json j;
  j["slope"] = est.slope;
  j["residual"] = est.residual;
  j["slope_stderr"] = est.slope_stderr;
  j["window"] = {est.window_lo, est.window_hi};
  j["valid"] = est.valid;
  return j;
}

Json to_json(const quadrature::ConvergenceVerdict& verdict) {
  Json j;
  j["verdict"] = quadrature::to_string(verdict.verdict);
  j["tail"] = to_json(verdict.tail);
  if (verdict.origin) j["origin"] = to_json(*verdict.origin);
  if (verdict.value) j["value"] = *verdict.value;
  j["shells"] = {{"m_min", verdict.table.m_min},
                 {"m_max", verdict.table.m_max},
                 {"partial_sum", verdict.table.total_mass()}};
  j["diagnostics"] = verdict.diagnostics;
  return j;
}

Json to_json(const analysis::DimensionResult& result) {
  Json j;
  j["dim"] = result.dim;
  j["method"] = result.method == analysis::DimensionMethod::SlopeDirect
                    ? "slope_direct"
                    : "bisection";
  j["critical_beta"] = result.critical_beta;
  j["slope_estimate"] = result.slope_estimate;
  j["uncertainty"] = result.uncertainty;
  auto trail = Json::array();
  for (const auto& [beta, verdict] : result.trail)
    trail.push_back({{"beta", beta}, {"verdict", quadrature::to_string(verdict)}});
  j["trail"] = trail;
  j["flags"] = result.flags;
  return j;
}

Json to_json(const analysis::RangeScale& scale) {
  Json j;
  j["verdict"] = quadrature::to_string(scale.verdict);
  j["q_integral"] = std::isfinite(scale.q_integral)
                        ? Json(scale.q_integral)
                        : Json("infinite");
  j["lower_scale"] = scale.lower_scale;
  j["upper_scale"] = scale.upper_scale;
  j["diagnostics"] = scale.diagnostics;
  return j;
}

Json to_json(const simulate::OccupationSample& sample) {
  Json j;
  j["xi"] = sample.xi;
  j["estimate"] = sample.estimate;
  j["stderr"] = sample.stderr_;
  j["analytic"] = sample.analytic;
  j["agreement_3sigma"] =
      std::abs(sample.estimate - sample.analytic) <= 3.0 * sample.stderr_;
  j["h"] = sample.h;
  j["t_kill"] = sample.t_kill;
  j["replicates"] = sample.replicates;
  return j;
}

Json job_report(const std::string& question, Json inputs, std::uint64_t seed,
                bool deterministic, double elapsed_ms) {
  Json j;
  j["schema"] = 1;
  j["question"] = question;
  j["inputs"] = std::move(inputs);
  j["seed"] = seed;
  if (!deterministic) {
    j["timing_ms"] = elapsed_ms;
    auto now = std::chrono::system_clock::now();
    j["generated_at_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
            .count();
  }
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace addlevy::report
