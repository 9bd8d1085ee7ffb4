// Command-line front end: batch analysis and simulation jobs with JSON
// reports and CSV shell tables. Exit codes: 0 criterion holds / valid result,
// 1 usage or config error, 2 criterion fails (Diverges), 3 boundary
// (Critical or flagged result).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "addlevy/analysis.hpp"
#include "addlevy/config.hpp"
#include "addlevy/quadrature.hpp"
#include "addlevy/report.hpp"
#include "addlevy/rng.hpp"
#include "addlevy/simulate.hpp"

namespace {

using addlevy::report::Json;
using addlevy::quadrature::Verdict;

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string shells;
  int samples = 0;
  double beta_tol = 0.0;
  std::string out = ".";
  std::string format = "json";
  bool deterministic = false;
  int threads = 0;
  std::vector<double> xi;
  bool dump_replicates = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_quadrature) {
  cmd->add_option("config", flags.config_path, "process configuration (JSON)")
      ->required();
  cmd->add_option("--seed", flags.seed, "RNG seed")->each([&](const std::string&) {
    flags.seed_set = true;
  });
  if (with_quadrature) {
    cmd->add_option("--shells", flags.shells, "shell range m_min:m_max");
    cmd->add_option("--samples", flags.samples, "Monte Carlo samples per shell");
    cmd->add_option("--beta-tol", flags.beta_tol, "bisection bracket target");
  }
  cmd->add_option("--out", flags.out, "output directory for report artifacts");
  cmd->add_option("--format", flags.format, "stdout format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--deterministic", flags.deterministic,
                "omit timing/timestamp fields for byte-reproducible reports");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = auto)");
}

addlevy::quadrature::QuadratureOptions quad_options(const CommonFlags& flags) {
  addlevy::quadrature::QuadratureOptions opts;
  if (flags.seed_set) opts.seed = flags.seed;
  if (!flags.shells.empty()) {
    auto colon = flags.shells.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--shells expects m_min:m_max");
    opts.m_min = std::stoi(flags.shells.substr(0, colon));
    opts.m_max = std::stoi(flags.shells.substr(colon + 1));
    if (opts.m_min >= opts.m_max)
      throw std::invalid_argument("--shells expects m_min < m_max");
  }
  if (flags.samples > 0) opts.samples_per_shell = flags.samples;
  if (flags.threads > 0) opts.threads = flags.threads;
  return opts;
}

Json flags_json(const CommonFlags& flags,
                const addlevy::quadrature::QuadratureOptions& opts) {
  Json j;
  j["seed"] = opts.seed;
  j["shells"] = {opts.m_min, opts.m_max};
  j["samples"] = opts.samples_per_shell;
  j["out"] = flags.out;
  j["format"] = flags.format;
  j["deterministic"] = flags.deterministic;
  return j;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Converges: return 0;
    case Verdict::Diverges: return 2;
    case Verdict::Critical: return 3;
  }
  return 1;
}

std::string csv_string(const addlevy::quadrature::ShellTable& table) {
  std::ostringstream os;
  table.write_csv(os);
  return os.str();
}

std::string replicate_csv(const std::string& statistic,
                          const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(17);
  os << "replicate,statistic,value\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    os << i << ',' << statistic << ',' << values[i] << '\n';
  return os.str();
}

void emit(const Json& report, const std::string& base, const CommonFlags& flags,
          const std::string& csv) {
  addlevy::report::write_file(base + "_report.json", report.dump(2) + "\n");
  if (!csv.empty()) addlevy::report::write_file(base + "_shells.csv", csv);
  if (flags.format == "csv")
    std::cout << csv;
  else
    std::cout << report.dump(2) << '\n';
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

int run_analyze(const std::string& question, const CommonFlags& flags) {
  auto start = std::chrono::steady_clock::now();
  auto cfg = addlevy::config::load_config(flags.config_path);
  auto opts = quad_options(flags);

  addlevy::analysis::AnalysisOptions aopts;
  aopts.quad = opts;
  if (flags.beta_tol > 0.0) aopts.beta_tol = flags.beta_tol;

  Json inputs;
  inputs["config"] = addlevy::config::echo_json(cfg);
  inputs["flags"] = flags_json(flags, opts);
  if (question == "dimension" || question == "multipoints")
    inputs["flags"]["beta_tol"] = aopts.beta_tol;

  std::string base = flags.out + "/" + question;
  Json report;
  int exit_code = 0;
  std::string csv;

  if (question == "range") {
    auto process = addlevy::config::build_process(cfg);
    auto res = addlevy::analysis::range_positivity(process, opts);
    report = addlevy::report::job_report("range_positivity", inputs, opts.seed,
                                         flags.deterministic, elapsed_ms(start));
    report["decision"] = addlevy::report::to_json(res.decision);
    report["verdict"] = addlevy::quadrature::to_string(res.decision.verdict);
    report["range_positive"] = res.criterion_holds();
    if (res.decision.value)
      report["point_mass_energy"] =
          addlevy::analysis::point_mass_energy(*res.decision.value, process.dim());
    report["dim"] = nullptr;
    report["critical_beta"] = nullptr;
    report["assumptions"] = res.assumptions;
    csv = csv_string(res.decision.table);
    exit_code = verdict_exit(res.decision.verdict);
  } else if (question == "dimension") {
    auto process = addlevy::config::build_process(cfg);
    auto res = addlevy::analysis::hausdorff_dimension_range(process, aopts);
    report = addlevy::report::job_report("hausdorff_dimension_range", inputs,
                                         opts.seed, flags.deterministic,
                                         elapsed_ms(start));
    report["result"] = addlevy::report::to_json(res);
    report["verdict"] = res.flagged() ? "Critical" : "Converges";
    report["dim"] = res.dim;
    report["critical_beta"] = res.critical_beta;
    report["assumptions"] = Json::array();
    csv = csv_string(res.base_table);
    exit_code = res.flagged() ? 3 : 0;
  } else if (question == "multipoints") {
    int k = cfg.k.value_or(static_cast<int>(cfg.components.size()));
    auto exponents = addlevy::config::build_exponent_list(cfg, k);
    auto res = addlevy::analysis::multiple_points_exist(exponents, opts);
    report = addlevy::report::job_report("multiple_points_exist", inputs, opts.seed,
                                         flags.deterministic, elapsed_ms(start));
    report["k"] = k;
    report["decision"] = addlevy::report::to_json(res.decision);
    report["verdict"] = addlevy::quadrature::to_string(res.decision.verdict);
    report["multiple_points_exist"] = res.criterion_holds();
    report["dim"] = nullptr;
    report["critical_beta"] = nullptr;
    report["assumptions"] = res.assumptions;
    csv = csv_string(res.decision.table);
    exit_code = verdict_exit(res.decision.verdict);
  } else if (question == "subintersect") {
    if (cfg.components.size() != 2)
      throw std::invalid_argument(
          "subintersect needs exactly two components (the two subordinators)");
    auto exponents = addlevy::config::build_exponent_list(cfg, 2);
    auto res = addlevy::analysis::subordinator_intersection(exponents[0],
                                                            exponents[1], opts);
    report = addlevy::report::job_report("subordinator_intersection", inputs,
                                         opts.seed, flags.deterministic,
                                         elapsed_ms(start));
    report["decision"] = addlevy::report::to_json(res.decision);
    report["verdict"] = addlevy::quadrature::to_string(res.decision.verdict);
    report["ranges_intersect"] = res.criterion_holds();
    report["dim"] = nullptr;
    report["critical_beta"] = nullptr;
    report["assumptions"] = res.assumptions;
    csv = csv_string(res.decision.table);
    exit_code = verdict_exit(res.decision.verdict);
  } else {
    throw std::invalid_argument("unknown analyze question: " + question);
  }

  report["shell_csv_path"] = base + "_shells.csv";
  report["artifacts"] = {base + "_report.json", base + "_shells.csv"};
  emit(report, base, flags, csv);
  return exit_code;
}

int run_simulate(const std::string& question, const CommonFlags& flags) {
  auto start = std::chrono::steady_clock::now();
  auto cfg = addlevy::config::load_config(flags.config_path);
  auto sim = addlevy::config::build_simulation(cfg);
  if (flags.seed_set) sim.seed = flags.seed;
  if (flags.threads > 0) sim.threads = flags.threads;

  Json inputs;
  inputs["config"] = addlevy::config::echo_json(cfg);
  inputs["flags"] = Json{{"seed", sim.seed},
                         {"out", flags.out},
                         {"format", flags.format},
                         {"deterministic", flags.deterministic}};

  // Sum of stable indices governs the analytic range/dimension answers.
  double alpha_sum = 0.0;
  for (const auto& c : sim.components)
    alpha_sum += c.family == addlevy::simulate::Family::Brownian ? 2.0
                 : c.family == addlevy::simulate::Family::Constant ? 0.0
                                                                   : c.alpha;

  std::string base = flags.out + "/sim_" + question;
  Json report;
  std::string csv;

  if (question == "occupation") {
    std::vector<double> xi = flags.xi;
    if (xi.empty()) xi.assign(sim.d, 1.0);
    if (static_cast<int>(xi.size()) != sim.d)
      throw std::invalid_argument("--xi needs exactly d values");
    inputs["flags"]["xi"] = xi;
    auto res = addlevy::simulate::occupation_fourier(sim, xi);
    report = addlevy::report::job_report("simulate_occupation", inputs, sim.seed,
                                         flags.deterministic, elapsed_ms(start));
    report["occupation"] = addlevy::report::to_json(res);
    csv = replicate_csv("occupation_fourier_sq", res.per_replicate);
  } else if (question == "range") {
    auto res = addlevy::simulate::range_volume(sim);
    report = addlevy::report::job_report("simulate_range_volume", inputs, sim.seed,
                                         flags.deterministic, elapsed_ms(start));
    report["range_volume"] = {{"volume", res.volume},
                              {"stderr", res.stderr_},
                              {"replicates", res.replicates},
                              {"voxel_delta", sim.voxel_delta}};
    report["analytic"] = {{"range_positive", alpha_sum > sim.d},
                          {"alpha_sum", alpha_sum}};
    csv = replicate_csv("range_volume", res.per_replicate);
  } else if (question == "boxdim") {
    auto res = addlevy::simulate::box_counting_dimension(sim);
    report = addlevy::report::job_report("simulate_box_dimension", inputs, sim.seed,
                                         flags.deterministic, elapsed_ms(start));
    double analytic = std::min(static_cast<double>(sim.d), alpha_sum);
    report["box_dimension"] = {{"dim", res.dim},
                               {"residual", res.residual},
                               {"dim_stderr", res.dim_stderr},
                               {"levels_used", res.levels_used}};
    report["analytic"] = {{"dim", analytic}};
    report["agreement"] = std::abs(res.dim - analytic) <= 0.25;
    csv.clear();
  } else {
    throw std::invalid_argument("unknown simulate question: " + question);
  }

  if (!csv.empty() && flags.dump_replicates)
    addlevy::report::write_file(base + "_replicates.csv", csv);
  addlevy::report::write_file(base + "_report.json", report.dump(2) + "\n");
  if (flags.format == "csv")
    std::cout << csv;
  else
    std::cout << report.dump(2) << '\n';
  return 0;
}

int run_diagnose_sector(const CommonFlags& flags) {
  auto start = std::chrono::steady_clock::now();
  auto cfg = addlevy::config::load_config(flags.config_path);
  auto process = addlevy::config::build_process(cfg);
  auto opts = quad_options(flags);

  constexpr int kPoints = 10000;
  const int n_shells = opts.m_max - opts.m_min + 1;
  std::vector<double> ratios(kPoints);
  std::vector<double> point(process.dim());
  addlevy::rng::Stream stream(opts.seed, 0xd1a6);
  for (int i = 0; i < kPoints; ++i) {
    int m = opts.m_min + (i % n_shells);
    addlevy::quadrature::sample_shell_point(process.dim(), m, stream, point);
    ratios[i] = addlevy::sector_ratio(process, point);
  }
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    return sorted[static_cast<std::size_t>(q * (kPoints - 1))];
  };

  Json inputs;
  inputs["config"] = addlevy::config::echo_json(cfg);
  inputs["flags"] = flags_json(flags, opts);
  Json report = addlevy::report::job_report("sector_diagnostic", inputs, opts.seed,
                                            flags.deterministic, elapsed_ms(start));
  double min_ratio = sorted.front();
  report["points"] = kPoints;
  report["min_ratio"] = min_ratio;
  report["quantiles"] = {{"p01", quantile(0.01)},
                         {"p10", quantile(0.10)},
                         {"p50", quantile(0.50)},
                         {"p90", quantile(0.90)}};
  report["sector_condition_violated"] = min_ratio <= 0.0;
  if (min_ratio > 0.0) report["theta_lower_bound"] = min_ratio;

  std::string base = flags.out + "/sector";
  addlevy::report::write_file(base + "_report.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-integral criteria and Monte Carlo simulation for "
               "additive Levy processes"};
  app.require_subcommand(1);

  CommonFlags analyze_flags, simulate_flags, sector_flags;
  std::string analyze_question, simulate_question;

  auto* analyze = app.add_subcommand(
      "analyze", "decide range/dimension/multipoint/intersection criteria");
  analyze->require_subcommand(1);
  for (const char* q : {"range", "dimension", "multipoints", "subintersect"}) {
    auto* sub = analyze->add_subcommand(q);
    add_common(sub, analyze_flags, true);
    sub->callback([&analyze_question, q] { analyze_question = q; });
  }

  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo path simulation cross-checks");
  simulate->require_subcommand(1);
  for (const char* q : {"range", "occupation", "boxdim"}) {
    auto* sub = simulate->add_subcommand(q);
    add_common(sub, simulate_flags, false);
    if (std::string(q) == "occupation")
      sub->add_option("--xi", simulate_flags.xi, "evaluation frequency (d values)");
    sub->add_flag("--dump-replicates", simulate_flags.dump_replicates,
                  "write per-replicate CSV");
    sub->callback([&simulate_question, q] { simulate_question = q; });
  }

  auto* sector = app.add_subcommand(
      "diagnose-sector", "sample the sector-condition ratio across shells");
  add_common(sector, sector_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (analyze->parsed()) return run_analyze(analyze_question, analyze_flags);
    if (simulate->parsed()) return run_simulate(simulate_question, simulate_flags);
    if (sector->parsed()) return run_diagnose_sector(sector_flags);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
