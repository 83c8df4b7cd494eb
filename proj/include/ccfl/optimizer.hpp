#ifndef CCFL_OPTIMIZER_HPP
#define CCFL_OPTIMIZER_HPP

// Latency minimisation under the covert constraint.
//
// For a fixed jamming power the covert constraint caps each device at
// r_max(eps) * (p_j/N) * g_jw / g_dw, and latency strictly falls with device
// power, so every device transmits at min(p_max, cap). That makes the power
// block a 1-D problem in p_j. The solver alternates
//
//   power block:    p_j  <- argmin latency(p_j, implied powers, eta)
//   accuracy block: eta  <- argmin latency(fixed powers, eta)
//
// until the relative improvement drops below objective_rel_tol.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccfl/allocation.hpp"
#include "ccfl/channel.hpp"
#include "ccfl/covert.hpp"
#include "ccfl/errors.hpp"
#include "ccfl/golden_section.hpp"
#include "ccfl/latency.hpp"
#include "ccfl/scenario.hpp"

namespace ccfl {

struct OptimizerSettings {
  std::size_t max_outer_iters = 50;
  double objective_rel_tol = 1e-6;
  double golden_section_tol = 1e-8;  // fraction of the search interval
  double eta_min = 0.01;
  double eta_max = 0.99;
  double pj_lower = 1e-3;  // W
  std::size_t eta_scan_points = 32;

  void validate() const {
    if (!(objective_rel_tol > 0.0) || !(golden_section_tol > 0.0))
      throw std::invalid_argument("OptimizerSettings: tolerances must be > 0");
    if (!(eta_min > 0.0 && eta_min < eta_max && eta_max < 1.0))
      throw std::invalid_argument("OptimizerSettings: eta bounds must satisfy 0 < min < max < 1");
    if (!(pj_lower > 0.0)) throw std::invalid_argument("OptimizerSettings: pj_lower must be > 0");
  }
};

struct OptimizationResult {
  Allocation allocation;
  LatencyBreakdown latency;
  std::vector<DetectionReport> covert;
  double network_covert = 0.0;
  std::size_t outer_iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // s
};

/// Feasible jamming-power interval [pj_lower, min(jammer max, budget/price)].
inline std::pair<double, double> jam_power_interval(const Scenario& s,
                                                    const OptimizerSettings& cfg) {
  double hi = s.jammer_max_power;
  if (s.jam_price > 0.0) {
    double affordable = s.budget / s.jam_price;
    while (affordable > 0.0 && s.jam_price * affordable > s.budget)
      affordable = std::nextafter(affordable, 0.0);
    hi = std::min(hi, affordable);
  }
  if (hi < cfg.pj_lower) {
    throw InfeasibleError("budget", "affordable jamming power " + std::to_string(hi) +
                                        " W is below the floor " + std::to_string(cfg.pj_lower) +
                                        " W");
  }
  return {cfg.pj_lower, hi};
}

inline std::vector<double> implied_device_powers(double p_j, double epsilon, const Scenario& s,
                                                 const ChannelSet& ch) {
  std::vector<double> powers(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    powers[i] = std::min(s.devices[i].max_power, covert_power_cap(i, p_j, epsilon, ch));
  return powers;
}

/// Name of the first violated constraint, or nullopt when feasible.
inline std::optional<std::string> check_feasibility(const Allocation& a, const Scenario& s,
                                                    const ChannelSet& ch, double tol = 1e-9) {
  if (a.device_powers.size() != s.size()) return "allocation size";
  if (!(a.local_accuracy > 0.0 && a.local_accuracy < 1.0)) return "local accuracy";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double p = a.device_powers[i];
    if (!(p >= 0.0) || p > s.devices[i].max_power * (1.0 + tol)) return "device power";
  }
  if (!(a.jam_power >= 0.0) || a.jam_power > s.jammer_max_power * (1.0 + tol))
    return "jammer power";
  if (s.jam_price * a.jam_power > s.budget * (1.0 + tol)) return "budget";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (device_covert_probability(i, a.device_powers[i], a.jam_power, ch) < 1.0 - s.epsilon - tol)
      return "CC constraint";
  }
  return std::nullopt;
}

struct PowerSolution {
  double jam_power = 0.0;
  std::vector<double> device_powers;
  double latency = 0.0;
};

inline PowerSolution power_subproblem(double eta, const Scenario& s, const ChannelSet& ch,
                                      const OptimizerSettings& cfg) {
  const auto [lo, hi] = jam_power_interval(s, cfg);
  Allocation probe;
  probe.local_accuracy = eta;
  auto objective = [&](double p_j) {
    probe.jam_power = p_j;
    probe.device_powers = implied_device_powers(p_j, s.epsilon, s, ch);
    return fl_latency_total(probe, s, ch);
  };
  const LineMinimum m = golden_section_minimize(objective, lo, hi, cfg.golden_section_tol);
  return {m.x, implied_device_powers(m.x, s.epsilon, s, ch), m.value};
}

inline double accuracy_subproblem(const Allocation& powers, const Scenario& s,
                                  const ChannelSet& ch, const OptimizerSettings& cfg) {
  Allocation probe = powers;
  auto objective = [&](double eta) {
    probe.local_accuracy = eta;
    return fl_latency_total(probe, s, ch);
  };
  return scan_then_golden(objective, cfg.eta_min, cfg.eta_max, cfg.eta_scan_points,
                          cfg.golden_section_tol)
      .x;
}

namespace detail {

inline void require_solvable(const Scenario& s, const OptimizerSettings& cfg) {
  cfg.validate();
  if (s.epsilon <= 0.0)
    throw InfeasibleError("CC constraint", "epsilon = 0: no transmission is covert");
}

inline OptimizationResult finish(Allocation a, const Scenario& s, const ChannelSet& ch) {
  if (auto bad = check_feasibility(a, s, ch)) {
    throw InfeasibleError(*bad, "returned allocation violates the constraint");
  }
  OptimizationResult r;
  r.latency = fl_latency(a, s, ch);
  r.covert = device_detections(a, ch);
  r.network_covert = network_covert_probability(a, s, ch);
  r.allocation = std::move(a);
  return r;
}

}  // namespace detail

inline OptimizationResult optimize(const Scenario& s, const OptimizerSettings& cfg = {}) {
  detail::require_solvable(s, cfg);
  const ChannelSet ch = build_channels(s);
  const auto [lo, hi] = jam_power_interval(s, cfg);

  Allocation current;
  current.jam_power = 0.5 * (lo + hi);
  current.device_powers = implied_device_powers(current.jam_power, s.epsilon, s, ch);
  current.local_accuracy = 0.5;
  double objective = fl_latency_total(current, s, ch);

  std::vector<double> trace{objective};
  bool converged = false;
  std::size_t iters = 0;
  while (iters < cfg.max_outer_iters) {
    ++iters;
    const double previous = objective;

    // Each block only replaces the incumbent when it does not worsen it.
    PowerSolution pw = power_subproblem(current.local_accuracy, s, ch, cfg);
    if (pw.latency <= objective) {
      current.jam_power = pw.jam_power;
      current.device_powers = std::move(pw.device_powers);
      objective = pw.latency;
    }

    Allocation candidate = current;
    candidate.local_accuracy = accuracy_subproblem(current, s, ch, cfg);
    const double acc_objective = fl_latency_total(candidate, s, ch);
    if (acc_objective <= objective) {
      current = std::move(candidate);
      objective = acc_objective;
    }

    trace.push_back(objective);
    if (previous - objective <= cfg.objective_rel_tol * previous) {
      converged = true;
      break;
    }
  }

  OptimizationResult r = detail::finish(std::move(current), s, ch);
  r.outer_iterations = iters;
  r.converged = converged;
  r.objective_trace = std::move(trace);
  return r;
}

namespace detail {
inline double grid_point(double lo, double hi, std::size_t k, std::size_t n) {
  if (n == 1) return 0.5 * (lo + hi);
  if (k + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
}
}  // namespace detail

/// Exhaustive (p_j, eta) grid with implied device powers. Both axes are
/// uniform and include their endpoints (a single point sits at the centre).
inline OptimizationResult brute_force(const Scenario& s, std::size_t grid_pj, std::size_t grid_eta,
                                      const OptimizerSettings& cfg = {}) {
  detail::require_solvable(s, cfg);
  if (grid_pj == 0 || grid_eta == 0) throw std::invalid_argument("brute_force: empty grid");
  const ChannelSet ch = build_channels(s);
  const auto [lo, hi] = jam_power_interval(s, cfg);

  Allocation best;
  double best_latency = std::numeric_limits<double>::infinity();
  Allocation probe;
  for (std::size_t a = 0; a < grid_pj; ++a) {
    probe.jam_power = detail::grid_point(lo, hi, a, grid_pj);
    probe.device_powers = implied_device_powers(probe.jam_power, s.epsilon, s, ch);
    for (std::size_t b = 0; b < grid_eta; ++b) {
      probe.local_accuracy = detail::grid_point(cfg.eta_min, cfg.eta_max, b, grid_eta);
      const double t = fl_latency_total(probe, s, ch);
      if (t < best_latency) {
        best_latency = t;
        best = probe;
      }
    }
  }

  OptimizationResult r = detail::finish(std::move(best), s, ch);
  r.converged = true;
  r.objective_trace = {best_latency};
  return r;
}

}  // namespace ccfl

#endif  // CCFL_OPTIMIZER_HPP
