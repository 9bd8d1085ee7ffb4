#include "addlevy/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace addlevy::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config: " + where + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) fail(where, "unknown field \"" + it.key() + "\"");
}

double require_number(const json& obj, const std::string& key,
                      const std::string& where) {
  if (!obj.contains(key)) fail(where, "missing field \"" + key + "\"");
  if (!obj.at(key).is_number()) fail(where, "field \"" + key + "\" must be a number");
  return obj.at(key).get<double>();
}

ComponentConfig parse_component(const json& obj, const std::string& where) {
  if (!obj.is_object()) fail(where, "component must be an object");
  if (!obj.contains("family")) fail(where, "missing field \"family\"");
  ComponentConfig c;
  c.family = obj.at("family").get<std::string>();
  if (c.family == "isotropic_stable" || c.family == "stable_subordinator") {
    reject_unknown(obj, {"family", "alpha"}, where);
    c.alpha = require_number(obj, "alpha", where);
  } else if (c.family == "brownian" || c.family == "constant") {
    reject_unknown(obj, {"family"}, where);
  } else if (c.family == "drift") {
    reject_unknown(obj, {"family", "b"}, where);
    if (!obj.contains("b")) fail(where, "drift needs field \"b\"");
    const json& b = obj.at("b");
    if (b.is_number()) {
      c.drift_b.push_back(b.get<double>());
    } else if (b.is_array()) {
      for (const auto& v : b) c.drift_b.push_back(v.get<double>());
    } else {
      fail(where, "\"b\" must be a number or an array");
    }
  } else {
    fail(where, "unknown family \"" + c.family + "\"");
  }
  return c;
}

}  // namespace

ProcessConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("top level", "document must be an object");
  reject_unknown(doc, {"d", "components", "k", "simulation"}, "top level");

  ProcessConfig cfg;
  if (!doc.contains("d")) fail("top level", "missing field \"d\"");
  if (!doc.at("d").is_number_integer()) fail("top level", "\"d\" must be an integer");
  cfg.d = doc.at("d").get<int>();
  if (cfg.d < 1) fail("top level", "\"d\" must be >= 1");

  if (!doc.contains("components") || !doc.at("components").is_array() ||
      doc.at("components").empty())
    fail("top level", "\"components\" must be a non-empty array");
  int idx = 0;
  for (const auto& comp : doc.at("components")) {
    cfg.components.push_back(
        parse_component(comp, "components[" + std::to_string(idx) + "]"));
    ++idx;
  }

  if (doc.contains("k")) {
    if (!doc.at("k").is_number_integer()) fail("top level", "\"k\" must be an integer");
    cfg.k = doc.at("k").get<int>();
    if (*cfg.k < 2) fail("top level", "\"k\" must be >= 2");
  }

  cfg.simulation.d = cfg.d;
  if (doc.contains("simulation")) {
    cfg.has_simulation = true;
    const json& sim = doc.at("simulation");
    if (!sim.is_object()) fail("simulation", "must be an object");
    reject_unknown(sim, {"r", "h", "replicates", "seed", "voxel_delta", "t_kill"},
                   "simulation");
    if (sim.contains("r")) cfg.simulation.r = require_number(sim, "r", "simulation");
    if (sim.contains("h")) cfg.simulation.h = require_number(sim, "h", "simulation");
    if (sim.contains("replicates"))
      cfg.simulation.replicates = sim.at("replicates").get<int>();
    if (sim.contains("seed"))
      cfg.simulation.seed = sim.at("seed").get<std::uint64_t>();
    if (sim.contains("voxel_delta"))
      cfg.simulation.voxel_delta = require_number(sim, "voxel_delta", "simulation");
    if (sim.contains("t_kill"))
      cfg.simulation.t_kill = require_number(sim, "t_kill", "simulation");
  }
  return cfg;
}

ProcessConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open \"" + path + "\"");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    // e.what() carries the byte position of the syntax error.
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return parse_config(doc);
}

namespace {

LevyExponent build_component(const ComponentConfig& c, int d) {
  if (c.family == "isotropic_stable")
    return LevyExponent::isotropic_stable(d, *c.alpha);
  if (c.family == "brownian") return LevyExponent::isotropic_stable(d, 2.0);
  if (c.family == "stable_subordinator") {
    if (d != 1)
      throw std::invalid_argument("config: stable_subordinator requires d = 1");
    return LevyExponent::stable_subordinator(*c.alpha);
  }
  if (c.family == "constant") return LevyExponent::constant(d);
  if (c.family == "drift") {
    std::vector<double> b = c.drift_b;
    if (static_cast<int>(b.size()) != d)
      throw std::invalid_argument("config: drift \"b\" must have d entries");
    return LevyExponent::drift(std::move(b));
  }
  throw std::invalid_argument("config: unknown family " + c.family);
}

simulate::SimComponent to_sim_component(const ComponentConfig& c) {
  if (c.family == "brownian") return {simulate::Family::Brownian, 2.0};
  if (c.family == "isotropic_stable")
    return {simulate::Family::IsotropicStable, *c.alpha};
  if (c.family == "stable_subordinator")
    return {simulate::Family::StableSubordinator, *c.alpha};
  if (c.family == "constant") return {simulate::Family::Constant, 0.0};
  throw std::invalid_argument("config: family \"" + c.family +
                              "\" is not simulable");
}

}  // namespace

AdditiveProcess build_process(const ProcessConfig& cfg) {
  std::vector<LevyExponent> comps;
  comps.reserve(cfg.components.size());
  for (const auto& c : cfg.components) comps.push_back(build_component(c, cfg.d));
  return AdditiveProcess(std::move(comps));
}

std::vector<LevyExponent> build_exponent_list(const ProcessConfig& cfg, int k) {
  if (k < 2) throw std::invalid_argument("config: k must be >= 2");
  std::vector<LevyExponent> out;
  if (cfg.components.size() == 1) {
    LevyExponent e = build_component(cfg.components.front(), cfg.d);
    out.assign(k, e);
  } else {
    if (static_cast<int>(cfg.components.size()) != k)
      throw std::invalid_argument(
          "config: components must have exactly 1 or k entries for a k-point "
          "question");
    for (const auto& c : cfg.components) out.push_back(build_component(c, cfg.d));
  }
  return out;
}

simulate::SimulationConfig build_simulation(const ProcessConfig& cfg) {
  simulate::SimulationConfig sim = cfg.simulation;
  sim.d = cfg.d;
  sim.components.clear();
  for (const auto& c : cfg.components) sim.components.push_back(to_sim_component(c));
  return sim;
}

nlohmann::ordered_json echo_json(const ProcessConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["d"] = cfg.d;
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : cfg.components) {
    nlohmann::ordered_json jc;
    jc["family"] = c.family;
    if (c.alpha) jc["alpha"] = *c.alpha;
    if (!c.drift_b.empty()) jc["b"] = c.drift_b;
    comps.push_back(jc);
  }
  doc["components"] = comps;
  if (cfg.k) doc["k"] = *cfg.k;
  if (cfg.has_simulation) {
    nlohmann::ordered_json sim;
    sim["r"] = cfg.simulation.r;
    sim["h"] = cfg.simulation.h;
    sim["replicates"] = cfg.simulation.replicates;
    sim["seed"] = cfg.simulation.seed;
    sim["voxel_delta"] = cfg.simulation.voxel_delta;
    sim["t_kill"] = cfg.simulation.t_kill;
    doc["simulation"] = sim;
  }
  return doc;
}

}  // namespace addlevy::config
