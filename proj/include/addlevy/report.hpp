#pragma once

#include <string>

#include <json.hpp>

#include "addlevy/analysis.hpp"
#include "addlevy/quadrature.hpp"
#include "addlevy/simulate.hpp"

namespace addlevy::report {

using Json = nlohmann::ordered_json;

Json to_json(const quadrature::DecayEstimate& est);
Json to_json(const quadrature::ConvergenceVerdict& verdict);
Json to_json(const analysis::DimensionResult& result);
Json to_json(const analysis::RangeScale& scale);
Json to_json(const simulate::OccupationSample& sample);

/// Report skeleton: {"schema": 1, "question": ..., "inputs": ..., "seed": ...}
/// plus per-question payload merged by the caller; timing/timestamp fields are
/// added only when deterministic == false.
Json job_report(const std::string& question, Json inputs, std::uint64_t seed,
                bool deterministic, double elapsed_ms);

/// Write text to path, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace addlevy::report
