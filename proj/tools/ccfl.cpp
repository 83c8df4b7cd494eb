// ccfl: optimise, sweep and validate covert-communication-secured federated
// learning scenarios.
//
// Exit codes: 0 success, 1 usage/configuration error, 2 infeasible problem,
// 3 a validation invariant failed.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccfl/ccfl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;

struct ScenarioSource {
  std::string config;
  std::string preset = "paper-fig3";
  std::uint64_t seed = 0;
  std::optional<double> epsilon;
  std::optional<double> budget;
  std::optional<std::size_t> n_devices;

  void attach(CLI::App& cmd, bool overrides = true) {
    cmd.add_option("--config", config, "Scenario configuration file (JSON)");
    cmd.add_option("--preset", preset, "Named preset used when --config is absent")
        ->capture_default_str();
    cmd.add_option("--seed", seed, "Topology seed for presets; RNG seed for simulations")
        ->capture_default_str();
    if (overrides) {
      cmd.add_option("--epsilon", epsilon, "Override the security threshold");
      cmd.add_option("--budget", budget, "Override the server budget ($)");
      cmd.add_option("--n-devices", n_devices, "Override the device count (presets only)");
    }
  }

  bool from_file() const { return !config.empty(); }

  ccfl::Scenario resolve() const {
    ccfl::Scenario s;
    if (from_file()) {
      if (n_devices) throw ccfl::ConfigError("n-devices", "only valid with a preset");
      s = ccfl::load_scenario(config);
    } else {
      const auto& p = ccfl::find_preset(preset);
      s = ccfl::generate_scenario(n_devices.value_or(p.n_devices), p.side, seed, p.constants);
    }
    if (epsilon) s.epsilon = *epsilon;
    if (budget) s.budget = *budget;
    ccfl::validate(s);
    return s;
  }

  json describe() const {
    json j;
    if (from_file())
      j["config"] = config;
    else
      j["preset"] = preset;
    j["seed"] = seed;
    if (epsilon) j["epsilon"] = *epsilon;
    if (budget) j["budget"] = *budget;
    if (n_devices) j["n_devices"] = *n_devices;
    return j;
  }
};

json settings_json(const ccfl::OptimizerSettings& cfg) {
  return {{"max_outer_iters", cfg.max_outer_iters},
          {"objective_rel_tol", cfg.objective_rel_tol},
          {"golden_section_tol", cfg.golden_section_tol},
          {"eta_min", cfg.eta_min},
          {"eta_max", cfg.eta_max},
          {"pj_lower", cfg.pj_lower},
          {"eta_scan_points", cfg.eta_scan_points}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_table(const fs::path& path, const ccfl::CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  table.write(out);
}

void write_metadata(const fs::path& dir, const std::string& command, json body) {
  body["tool"] = "ccfl";
  body["version"] = ccfl::kVersion;
  body["command"] = command;
  write_text(dir / "metadata.json", body.dump(2) + "\n");
}

fs::path prepare_out(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// --- optimize ----------------------------------------------------------------

int cmd_optimize(const ScenarioSource& src, const std::string& out) {
  const ccfl::Scenario s = src.resolve();
  const ccfl::OptimizerSettings cfg;
  const fs::path dir = prepare_out(out);

  json meta{{"source", src.describe()}, {"scenario", ccfl::to_json(s)}, {"settings", settings_json(cfg)}};

  ccfl::OptimizationResult r;
  try {
    r = ccfl::optimize(s, cfg);
  } catch (const ccfl::InfeasibleError& e) {
    meta["infeasible"] = e.constraint();
    write_metadata(dir, "optimize", meta);
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }

  ccfl::CsvTable result({"latency", "eta", "jam_power", "min_covert_prob", "feasible",
                         "outer_iterations", "converged"});
  result.row()
      .add(r.latency.total)
      .add(r.allocation.local_accuracy)
      .add(r.allocation.jam_power)
      .add(r.network_covert)
      .add(true)
      .add(r.outer_iterations)
      .add(r.converged);
  write_table(dir / "result.csv", result);

  ccfl::CsvTable devices({"device", "power", "max_power", "compute_time", "upload_time",
                          "round_time", "p_fa", "p_md", "covert_prob", "threshold"});
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& d = r.covert[i];
    devices.row()
        .add(i)
        .add(r.allocation.device_powers[i])
        .add(s.devices[i].max_power)
        .add(r.latency.per_device_compute[i])
        .add(r.latency.per_device_upload[i])
        .add(r.latency.per_device_round[i])
        .add(d.p_fa)
        .add(d.p_md)
        .add(d.covert_prob)
        .add(d.threshold);
  }
  write_table(dir / "devices.csv", devices);

  ccfl::CsvTable trace({"iteration", "latency"});
  for (std::size_t k = 0; k < r.objective_trace.size(); ++k)
    trace.row().add(k).add(r.objective_trace[k]);
  write_table(dir / "trace.csv", trace);

  write_metadata(dir, "optimize", meta);
  result.write(std::cout);
  return 0;
}

// --- sweep -------------------------------------------------------------------

std::string plot_script(ccfl::SweepAxis axis) {
  const std::string x(ccfl::to_string(axis));
  return "# Plots the per-value medians written by `ccfl sweep`.\n"
         "import csv, sys\n"
         "import matplotlib.pyplot as plt\n\n"
         "path = sys.argv[1] if len(sys.argv) > 1 else 'sweep_summary.csv'\n"
         "rows = list(csv.DictReader(open(path)))\n"
         "x = [float(r['value']) for r in rows]\n"
         "fig, (a, b) = plt.subplots(1, 2, figsize=(10, 4))\n"
         "a.plot(x, [float(r['median_latency']) for r in rows], 'o-')\n"
         "a.set_xlabel('" + x + "'); a.set_ylabel('FL latency (s)')\n"
         "b.plot(x, [float(r['median_covert']) for r in rows], 's-')\n"
         "b.set_xlabel('" + x + "'); b.set_ylabel('network covert probability')\n"
         "fig.tight_layout()\n"
         "fig.savefig('sweep_" + x + ".png', dpi=150)\n";
}

int cmd_sweep(const ScenarioSource& src, const std::string& axis, const std::vector<double>& values,
              const std::vector<std::uint64_t>& seeds, unsigned jobs, bool emit_plot,
              const std::string& out) {
  ccfl::SweepSpec spec;
  spec.axis = ccfl::parse_axis(axis);
  spec.values = values;
  spec.seeds = seeds;
  if (src.from_file()) {
    spec.fixed = ccfl::load_scenario(src.config);
  } else {
    spec.preset = ccfl::find_preset(src.preset);
    if (src.epsilon) spec.preset.constants.epsilon = *src.epsilon;
    if (src.budget) spec.preset.constants.budget = *src.budget;
    if (src.n_devices) spec.preset.n_devices = *src.n_devices;
  }
  if (spec.fixed) {
    if (src.epsilon) spec.fixed->epsilon = *src.epsilon;
    if (src.budget) spec.fixed->budget = *src.budget;
  }
  spec.validate();

  const ccfl::OptimizerSettings cfg;
  const auto rows = ccfl::run_sweep(spec, cfg, jobs);
  const auto summary = ccfl::summarize(rows);
  const fs::path dir = prepare_out(out);

  ccfl::CsvTable table({"value", "seed", "feasible", "latency", "covert_prob", "jam_power", "eta",
                        "outer_iterations", "violated"});
  for (const auto& r : rows) {
    table.row()
        .add(r.value)
        .add(r.seed)
        .add(r.feasible)
        .add(r.latency)
        .add(r.covert)
        .add(r.jam_power)
        .add(r.eta)
        .add(r.outer_iterations)
        .add_text(r.violated.empty() ? "-" : r.violated);
  }
  write_table(dir / "sweep.csv", table);

  ccfl::CsvTable sum({"value", "feasible", "total", "median_latency", "median_covert",
                      "median_jam_power", "median_eta"});
  for (const auto& s : summary) {
    sum.row()
        .add(s.value)
        .add(s.feasible)
        .add(s.total)
        .add(s.median_latency)
        .add(s.median_covert)
        .add(s.median_jam_power)
        .add(s.median_eta);
  }
  write_table(dir / "sweep_summary.csv", sum);
  if (emit_plot) write_text(dir / "plot_sweep.py", plot_script(spec.axis));

  json meta{{"source", src.describe()},
            {"axis", axis},
            {"values", values},
            {"seeds", seeds},
            {"settings", settings_json(cfg)}};
  if (spec.fixed) meta["scenario"] = ccfl::to_json(*spec.fixed);
  write_metadata(dir, "sweep", meta);
  sum.write(std::cout);
  return 0;
}

// --- validate ----------------------------------------------------------------

int cmd_validate(const ScenarioSource& src, std::size_t trials, unsigned jobs,
                 std::optional<double> eta, const std::string& out) {
  if (trials < ccfl::kMinDetectionTrials)
    throw ccfl::ConfigError("trials", "must be at least " +
                                          std::to_string(ccfl::kMinDetectionTrials));
  const ccfl::Scenario s = src.resolve();
  const fs::path dir = prepare_out(out);
  bool ok = true;

  ccfl::CsvTable detection({"ratio", "threshold", "analytic_p_fa", "empirical_p_fa", "analytic_p_md",
                            "empirical_p_md", "analytic_covert", "empirical_covert",
                            "closed_form_floor", "std_error", "within_3se"});
  for (double r : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const ccfl::WardenObservationModel m{1.0, r, 1e-3};
    const double t = ccfl::optimal_threshold(m);
    const auto rep = ccfl::simulate_detection(m, t, trials, src.seed, jobs);
    const bool pass =
        std::abs(rep.empirical_p_fa - rep.analytic.p_fa) <= 3.0 * rep.std_error_fa &&
        std::abs(rep.empirical_p_md - rep.analytic.p_md) <= 3.0 * rep.std_error_md &&
        std::abs(rep.empirical_covert - ccfl::detection_error_floor(r)) <= 3.0 * rep.std_error;
    ok = ok && pass;
    detection.row()
        .add(r)
        .add(t)
        .add(rep.analytic.p_fa)
        .add(rep.empirical_p_fa)
        .add(rep.analytic.p_md)
        .add(rep.empirical_p_md)
        .add(rep.analytic.covert_prob)
        .add(rep.empirical_covert)
        .add(ccfl::detection_error_floor(r))
        .add(rep.std_error)
        .add(pass);
  }
  write_table(dir / "detection.csv", detection);

  ccfl::CsvTable traffic({"ratio", "alpha", "threshold", "transmissions", "empirical_total_error",
                          "analytic_total_error", "std_error", "within_3se"});
  {
    const ccfl::WardenObservationModel m{1.0, 2.0, 1e-3};
    const auto rep = ccfl::simulate_traffic_detection(m, s.tx_probability, trials, src.seed, jobs);
    const bool pass = std::abs(rep.total_error - rep.analytic_total) <= 3.0 * rep.std_error;
    ok = ok && pass;
    traffic.row()
        .add(2.0)
        .add(s.tx_probability)
        .add(rep.threshold)
        .add(rep.transmissions)
        .add(rep.total_error)
        .add(rep.analytic_total)
        .add(rep.std_error)
        .add(pass);
  }
  write_table(dir / "traffic.csv", traffic);

  ccfl::Allocation alloc;
  std::string eta_source = "flag";
  if (eta) {
    alloc.local_accuracy = *eta;
  } else {
    try {
      alloc = ccfl::optimize(s).allocation;
      eta_source = "optimized";
    } catch (const ccfl::InfeasibleError&) {
      alloc.local_accuracy = 0.5;
      eta_source = "default (scenario infeasible)";
    }
  }
  const auto fed = ccfl::run_fedavg_demo(s, alloc, 0.95, 50, src.seed);
  ccfl::CsvTable fedavg({"round", "global_loss", "global_accuracy", "transmissions"});
  for (std::size_t k = 0; k < fed.rounds; ++k) {
    fedavg.row()
        .add(k + 1)
        .add(fed.global_loss_per_round[k])
        .add(fed.global_accuracy_per_round[k])
        .add(fed.transmissions_per_round[k]);
  }
  write_table(dir / "fedavg.csv", fedavg);

  json meta{{"source", src.describe()},
            {"scenario", ccfl::to_json(s)},
            {"trials", trials},
            {"fedavg",
             {{"eta", alloc.local_accuracy},
              {"eta_source", eta_source},
              {"local_steps", fed.local_steps},
              {"rounds", fed.rounds},
              {"reached_target", fed.reached_target}}},
            {"oracle_agreement", ok}};
  write_metadata(dir, "validate", meta);

  detection.write(std::cout);
  std::cout << (ok ? "validation: all oracle checks within 3 standard errors\n"
                   : "validation: FAILED oracle agreement\n");
  return ok ? 0 : kExitValidation;
}

// --- scenario ----------------------------------------------------------------

int cmd_scenario(const ScenarioSource& src, const std::string& out) {
  const ccfl::Scenario s = src.resolve();
  if (out.empty() || out == "-")
    std::cout << ccfl::dump_scenario(s);
  else
    ccfl::save_scenario(s, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covert-communication federated learning laboratory"};
  app.set_version_flag("--version", std::string(ccfl::kVersion));
  app.require_subcommand(1);

  ScenarioSource opt_src;
  std::string opt_out;
  auto* optimize = app.add_subcommand("optimize", "Minimise FL latency for one scenario");
  opt_src.attach(*optimize);
  optimize->add_option("--out", opt_out, "Output directory")->required();

  ScenarioSource sweep_src;
  std::string sweep_out, axis;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  unsigned sweep_jobs = default_jobs();
  bool plot = false;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over several seeds");
  sweep_src.attach(*sweep);
  sweep->add_option("--axis", axis, "n_devices | epsilon | budget")->required();
  sweep->add_option("--values", values, "Comma-separated, strictly increasing")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',')->capture_default_str();
  sweep->add_option("--jobs", sweep_jobs, "Worker threads")->capture_default_str();
  sweep->add_flag("--plot-script", plot, "Also write a matplotlib script for the summary");
  sweep->add_option("--out", sweep_out, "Output directory")->required();

  ScenarioSource val_src;
  std::string val_out;
  std::size_t trials = 1'000'000;
  unsigned val_jobs = default_jobs();
  std::optional<double> val_eta;
  auto* validate = app.add_subcommand("validate", "Monte Carlo checks and a FedAvg demo");
  val_src.attach(*validate);
  validate->add_option("--trials", trials, "Trials per hypothesis (>= 10000)")->capture_default_str();
  validate->add_option("--jobs", val_jobs, "Worker threads")->capture_default_str();
  validate->add_option("--eta", val_eta, "Local accuracy for the FedAvg demo (default: optimised)");
  validate->add_option("--out", val_out, "Output directory")->required();

  ScenarioSource scen_src;
  std::string scen_out = "-";
  auto* scenario = app.add_subcommand("scenario", "Write the resolved scenario configuration");
  scen_src.attach(*scenario);
  scenario->add_option("--out", scen_out, "Output file ('-' for stdout)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*optimize) return cmd_optimize(opt_src, opt_out);
    if (*sweep) return cmd_sweep(sweep_src, axis, values, seeds, sweep_jobs, plot, sweep_out);
    if (*validate) return cmd_validate(val_src, trials, val_jobs, val_eta, val_out);
    if (*scenario) return cmd_scenario(scen_src, scen_out);
  } catch (const ccfl::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ccfl::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
