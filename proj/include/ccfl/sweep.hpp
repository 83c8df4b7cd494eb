#ifndef CCFL_SWEEP_HPP
#define CCFL_SWEEP_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ccfl/errors.hpp"
#include "ccfl/optimizer.hpp"
#include "ccfl/scenario.hpp"

namespace ccfl {

enum class SweepAxis { n_devices, epsilon, budget };

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::n_devices: return "n_devices";
    case SweepAxis::epsilon: return "epsilon";
    case SweepAxis::budget: return "budget";
  }
  return "?";
}

inline SweepAxis parse_axis(std::string_view name) {
  if (name == "n_devices") return SweepAxis::n_devices;
  if (name == "epsilon") return SweepAxis::epsilon;
  if (name == "budget") return SweepAxis::budget;
  throw ConfigError("axis", "unknown sweep axis '" + std::string(name) + "'");
}

/// One swept parameter over a base experiment. The base is either a preset
/// (a fresh topology per seed) or a fixed scenario (topology held constant;
/// n_devices cannot be swept).
struct SweepSpec {
  SweepAxis axis = SweepAxis::n_devices;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  Preset preset = paper_fig3_preset();
  std::optional<Scenario> fixed;

  void validate() const {
    if (values.empty()) throw ConfigError("values", "need at least one value");
    if (seeds.empty()) throw ConfigError("seeds", "need at least one seed");
    for (std::size_t k = 1; k < values.size(); ++k)
      if (!(values[k] > values[k - 1])) throw ConfigError("values", "must be strictly increasing");
    if (fixed && axis == SweepAxis::n_devices)
      throw ConfigError("axis", "n_devices cannot be swept over a fixed configuration");
    if (axis == SweepAxis::n_devices) {
      for (double v : values)
        if (!(v >= 1.0) || v != std::floor(v))
          throw ConfigError("values", "n_devices values must be positive integers");
    }
  }
};

inline Scenario sweep_scenario(const SweepSpec& spec, double value, std::uint64_t seed) {
  Scenario s;
  if (spec.fixed) {
    s = *spec.fixed;
  } else {
    const std::size_t n = spec.axis == SweepAxis::n_devices ? static_cast<std::size_t>(value)
                                                            : spec.preset.n_devices;
    s = generate_scenario(n, spec.preset.side, seed, spec.preset.constants);
  }
  if (spec.axis == SweepAxis::epsilon) s.epsilon = value;
  if (spec.axis == SweepAxis::budget) s.budget = value;
  validate(s);
  return s;
}

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  bool feasible = false;
  double latency = std::numeric_limits<double>::quiet_NaN();
  double covert = std::numeric_limits<double>::quiet_NaN();
  double jam_power = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
  std::size_t outer_iterations = 0;
  std::string violated;  // constraint name when infeasible
};

struct SweepSummary {
  double value = 0.0;
  std::size_t feasible = 0;
  std::size_t total = 0;
  double median_latency = std::numeric_limits<double>::quiet_NaN();
  double median_covert = std::numeric_limits<double>::quiet_NaN();
  double median_jam_power = std::numeric_limits<double>::quiet_NaN();
  double median_eta = std::numeric_limits<double>::quiet_NaN();
};

inline SweepRow run_sweep_point(const SweepSpec& spec, double value, std::uint64_t seed,
                                const OptimizerSettings& cfg) {
  SweepRow row;
  row.value = value;
  row.seed = seed;
  try {
    const Scenario s = sweep_scenario(spec, value, seed);
    const OptimizationResult r = optimize(s, cfg);
    row.feasible = true;
    row.latency = r.latency.total;
    row.covert = r.network_covert;
    row.jam_power = r.allocation.jam_power;
    row.eta = r.allocation.local_accuracy;
    row.outer_iterations = r.outer_iterations;
  } catch (const InfeasibleError& e) {
    row.violated = e.constraint();
  }
  return row;
}

/// Runs every (value, seed) point on `jobs` workers. Rows come back in
/// canonical order (value, then seed in the order given) regardless of the
/// schedule.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const OptimizerSettings& cfg = {},
                                       unsigned jobs = 1) {
  spec.validate();
  std::vector<std::uint64_t> seeds = spec.seeds;
  std::sort(seeds.begin(), seeds.end());
  const std::size_t n = spec.values.size() * seeds.size();
  std::vector<SweepRow> rows(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++)
      rows[k] = run_sweep_point(spec, spec.values[k / seeds.size()], seeds[k % seeds.size()], cfg);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
  }
  return rows;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Per-value medians over the feasible rows.
inline std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows) {
  std::vector<SweepSummary> out;
  for (std::size_t k = 0; k < rows.size();) {
    SweepSummary sum;
    sum.value = rows[k].value;
    std::vector<double> lat, cov, pj, eta;
    for (; k < rows.size() && rows[k].value == sum.value; ++k) {
      ++sum.total;
      if (!rows[k].feasible) continue;
      ++sum.feasible;
      lat.push_back(rows[k].latency);
      cov.push_back(rows[k].covert);
      pj.push_back(rows[k].jam_power);
      eta.push_back(rows[k].eta);
    }
    sum.median_latency = median(lat);
    sum.median_covert = median(cov);
    sum.median_jam_power = median(pj);
    sum.median_eta = median(eta);
    out.push_back(sum);
  }
  return out;
}

}  // namespace ccfl

#endif  // CCFL_SWEEP_HPP
