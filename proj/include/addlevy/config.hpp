#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "addlevy/exponent.hpp"
#include "addlevy/simulate.hpp"

namespace addlevy::config {

/// One process component as declared in a config document.
struct ComponentConfig {
  std::string family;              // isotropic_stable | brownian |
                                   // stable_subordinator | drift | constant
  std::optional<double> alpha;
  std::vector<double> drift_b;
};

/// Parsed process specification:
///   { "d": int,
///     "components": [ {"family": "...", ...}, ... ],
///     "k": int,                     (optional, multipoint questions)
///     "simulation": { "r", "h", "replicates", "seed", "voxel_delta",
///                     "t_kill" } } (optional, all fields optional)
/// Unknown fields are rejected.
struct ProcessConfig {
  int d = 1;
  std::vector<ComponentConfig> components;
  std::optional<int> k;
  bool has_simulation = false;
  simulate::SimulationConfig simulation;  // defaults materialized
};

ProcessConfig parse_config(const nlohmann::json& doc);
ProcessConfig load_config(const std::string& path);

/// Analytic exponents for the declared components.
AdditiveProcess build_process(const ProcessConfig& cfg);

/// Exponent list for a k-point question; a single declared component is
/// replicated k times (i.i.d. copies).
std::vector<LevyExponent> build_exponent_list(const ProcessConfig& cfg, int k);

/// Simulation config (validates that every family is simulable).
simulate::SimulationConfig build_simulation(const ProcessConfig& cfg);

/// Fully-resolved echo of the configuration (defaults materialized) for
/// report embedding.
nlohmann::ordered_json echo_json(const ProcessConfig& cfg);

}  // namespace addlevy::config
