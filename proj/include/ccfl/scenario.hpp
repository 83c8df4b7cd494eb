#ifndef CCFL_SCENARIO_HPP
#define CCFL_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ccfl/errors.hpp"
#include "ccfl/rng.hpp"

namespace ccfl {

struct Position {
  double x = 0.0;  // m
  double y = 0.0;  // m

  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct DeviceSpec {
  Position position;
  double max_power = 0.0;          // W
  std::int64_t samples = 0;        // D
  double cpu_freq = 0.0;           // cycles/s
  double cycles_per_sample = 0.0;  // cycles

  friend bool operator==(const DeviceSpec&, const DeviceSpec&) = default;
};

/// Full experiment configuration. Immutable once built; share freely.
struct Scenario {
  double area_side = 0.0;  // m
  std::vector<DeviceSpec> devices;
  Position bs_pos;
  Position jammer_pos;
  Position warden_pos;
  double jammer_max_power = 0.0;   // W
  double total_bandwidth = 0.0;    // Hz
  double noise_psd = 0.0;          // W/Hz
  double pathloss_ref_gain = 0.0;  // gain at 1 m
  double pathloss_exponent = 0.0;
  double epsilon = 0.0;         // security threshold
  double tx_probability = 0.0;  // per-round transmission probability
  double jam_price = 0.0;       // $/W
  double budget = 0.0;          // $
  double model_size_bits = 0.0;
  double local_iter_coeff = 0.0;   // nu
  double global_iter_coeff = 0.0;  // theta
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return devices.size(); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Everything in a Scenario except the topology.
struct ScenarioConstants {
  double device_max_power = dbm_to_watts(10.0);
  std::int64_t samples = 500;
  double cpu_freq = 2e9;
  double cycles_per_sample = 1e6;
  double jammer_max_power = 100.0;
  double total_bandwidth = 20e6;
  double noise_psd = std::pow(10.0, -20.4);  // -174 dBm/Hz
  double pathloss_ref_gain = 1e-3;
  double pathloss_exponent = 3.0;
  double epsilon = 0.1;
  double tx_probability = 0.7;
  double jam_price = 0.5;
  double budget = 30.0;
  double model_size_bits = 1e5;
  double local_iter_coeff = 10.0;
  double global_iter_coeff = 2.0;
};

/// Named presets. "paper-fig3": 50 devices in a 500 m square plus the
/// constants above.
struct Preset {
  std::string_view name;
  std::size_t n_devices;
  double side;
  ScenarioConstants constants;
};

inline const Preset& paper_fig3_preset() {
  static const Preset preset{"paper-fig3", 50, 500.0, ScenarioConstants{}};
  return preset;
}

inline const Preset& find_preset(std::string_view name) {
  if (name == paper_fig3_preset().name) return paper_fig3_preset();
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

namespace detail {

inline void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

inline bool inside(const Position& p, double side) {
  return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 && p.y >= 0.0 && p.x <= side &&
         p.y <= side;
}

}  // namespace detail

/// Checks every Scenario invariant; throws ConfigError naming the first
/// violated field.
inline void validate(const Scenario& s) {
  using detail::require;
  require(std::isfinite(s.area_side) && s.area_side > 0.0, "area_side", "must be > 0");
  require(!s.devices.empty(), "devices", "need at least one device");
  for (const auto& d : s.devices) {
    require(detail::inside(d.position, s.area_side), "devices.position",
            "device outside [0, area_side]^2");
    require(std::isfinite(d.max_power) && d.max_power > 0.0, "devices.max_power", "must be > 0");
    require(d.samples >= 1, "devices.samples", "must be >= 1");
    require(std::isfinite(d.cpu_freq) && d.cpu_freq > 0.0, "devices.cpu_freq", "must be > 0");
    require(std::isfinite(d.cycles_per_sample) && d.cycles_per_sample > 0.0,
            "devices.cycles_per_sample", "must be > 0");
  }
  require(detail::inside(s.bs_pos, s.area_side), "bs_pos", "outside the area");
  require(detail::inside(s.jammer_pos, s.area_side), "jammer_pos", "outside the area");
  require(detail::inside(s.warden_pos, s.area_side), "warden_pos", "outside the area");
  require(std::isfinite(s.jammer_max_power) && s.jammer_max_power > 0.0, "jammer_max_power",
          "must be > 0");
  require(std::isfinite(s.total_bandwidth) && s.total_bandwidth > 0.0, "total_bandwidth",
          "must be > 0");
  require(std::isfinite(s.noise_psd) && s.noise_psd > 0.0, "noise_psd", "must be > 0");
  require(std::isfinite(s.pathloss_ref_gain) && s.pathloss_ref_gain > 0.0, "pathloss_ref_gain",
          "must be > 0");
  require(std::isfinite(s.pathloss_exponent) && s.pathloss_exponent > 0.0, "pathloss_exponent",
          "must be > 0");
  require(s.epsilon >= 0.0 && s.epsilon <= 1.0, "epsilon", "must lie in [0, 1]");
  require(s.tx_probability > 0.0 && s.tx_probability <= 1.0, "tx_probability",
          "must lie in (0, 1]");
  require(std::isfinite(s.jam_price) && s.jam_price >= 0.0, "jam_price", "must be >= 0");
  require(std::isfinite(s.budget) && s.budget >= 0.0, "budget", "must be >= 0");
  require(std::isfinite(s.model_size_bits) && s.model_size_bits > 0.0, "model_size_bits",
          "must be > 0");
  require(std::isfinite(s.local_iter_coeff) && s.local_iter_coeff > 0.0, "local_iter_coeff",
          "must be > 0");
  require(std::isfinite(s.global_iter_coeff) && s.global_iter_coeff > 0.0, "global_iter_coeff",
          "must be > 0");
}

/// Random topology in a side x side square. The base station sits at the
/// centre; jammer, warden and then the devices are drawn uniformly from one
/// topology stream, so for a fixed seed a larger-N scenario extends the
/// smaller one.
inline Scenario generate_scenario(std::size_t n_devices, double side, std::uint64_t seed,
                                  const ScenarioConstants& k = {}) {
  if (n_devices == 0) throw std::invalid_argument("generate_scenario: n_devices must be >= 1");
  if (!(side > 0.0) || !std::isfinite(side))
    throw std::invalid_argument("generate_scenario: side must be > 0");

  Engine rng = make_engine(seed, Stream::topology);
  std::uniform_real_distribution<double> coord(0.0, side);
  auto draw = [&] {
    Position p;
    p.x = coord(rng);
    p.y = coord(rng);
    return p;
  };

  Scenario s;
  s.area_side = side;
  s.bs_pos = {side / 2.0, side / 2.0};
  s.jammer_pos = draw();
  s.warden_pos = draw();
  s.devices.reserve(n_devices);
  for (std::size_t i = 0; i < n_devices; ++i) {
    DeviceSpec d;
    d.position = draw();
    d.max_power = k.device_max_power;
    d.samples = k.samples;
    d.cpu_freq = k.cpu_freq;
    d.cycles_per_sample = k.cycles_per_sample;
    s.devices.push_back(d);
  }
  s.jammer_max_power = k.jammer_max_power;
  s.total_bandwidth = k.total_bandwidth;
  s.noise_psd = k.noise_psd;
  s.pathloss_ref_gain = k.pathloss_ref_gain;
  s.pathloss_exponent = k.pathloss_exponent;
  s.epsilon = k.epsilon;
  s.tx_probability = k.tx_probability;
  s.jam_price = k.jam_price;
  s.budget = k.budget;
  s.model_size_bits = k.model_size_bits;
  s.local_iter_coeff = k.local_iter_coeff;
  s.global_iter_coeff = k.global_iter_coeff;
  s.seed = seed;
  validate(s);
  return s;
}

inline Scenario generate_scenario(const Preset& preset, std::uint64_t seed) {
  return generate_scenario(preset.n_devices, preset.side, seed, preset.constants);
}

// --- configuration file (JSON) -------------------------------------------

inline nlohmann::json to_json(const Position& p) { return {{"x", p.x}, {"y", p.y}}; }

inline nlohmann::json to_json(const Scenario& s) {
  nlohmann::json devices = nlohmann::json::array();
  for (const auto& d : s.devices) {
    devices.push_back({{"x", d.position.x},
                       {"y", d.position.y},
                       {"max_power", d.max_power},
                       {"samples", d.samples},
                       {"cpu_freq", d.cpu_freq},
                       {"cycles_per_sample", d.cycles_per_sample}});
  }
  return {{"area_side", s.area_side},
          {"bs_pos", to_json(s.bs_pos)},
          {"jammer_pos", to_json(s.jammer_pos)},
          {"warden_pos", to_json(s.warden_pos)},
          {"devices", devices},
          {"jammer_max_power", s.jammer_max_power},
          {"total_bandwidth", s.total_bandwidth},
          {"noise_psd", s.noise_psd},
          {"pathloss_ref_gain", s.pathloss_ref_gain},
          {"pathloss_exponent", s.pathloss_exponent},
          {"epsilon", s.epsilon},
          {"tx_probability", s.tx_probability},
          {"jam_price", s.jam_price},
          {"budget", s.budget},
          {"model_size_bits", s.model_size_bits},
          {"local_iter_coeff", s.local_iter_coeff},
          {"global_iter_coeff", s.global_iter_coeff},
          {"seed", s.seed}};
}

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const std::string& key,
                                   const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(path.empty() ? key : path + "." + key, "missing required field");
  }
  return *it;
}

inline double number(const nlohmann::json& j, const std::string& key,
                     const std::string& path = {}) {
  const auto& v = field(j, key, path);
  if (!v.is_number()) throw ConfigError(path.empty() ? key : path + "." + key, "expected a number");
  return v.get<double>();
}

inline std::int64_t integer(const nlohmann::json& j, const std::string& key,
                            const std::string& path = {}) {
  const auto& v = field(j, key, path);
  if (!v.is_number_integer())
    throw ConfigError(path.empty() ? key : path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

inline Position position(const nlohmann::json& j, const std::string& key) {
  const auto& p = field(j, key, {});
  return {number(p, "x", key), number(p, "y", key)};
}

}  // namespace detail

/// Parses and validates a configuration document.
inline Scenario scenario_from_json(const nlohmann::json& j) {
  using namespace detail;
  Scenario s;
  s.area_side = number(j, "area_side");
  s.bs_pos = position(j, "bs_pos");
  s.jammer_pos = position(j, "jammer_pos");
  s.warden_pos = position(j, "warden_pos");
  const auto& devices = field(j, "devices", {});
  if (!devices.is_array()) throw ConfigError("devices", "expected an array");
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const std::string path = "devices[" + std::to_string(i) + "]";
    const auto& dj = devices[i];
    DeviceSpec d;
    d.position = {number(dj, "x", path), number(dj, "y", path)};
    d.max_power = number(dj, "max_power", path);
    d.samples = integer(dj, "samples", path);
    d.cpu_freq = number(dj, "cpu_freq", path);
    d.cycles_per_sample = number(dj, "cycles_per_sample", path);
    s.devices.push_back(d);
  }
  s.jammer_max_power = number(j, "jammer_max_power");
  s.total_bandwidth = number(j, "total_bandwidth");
  s.noise_psd = number(j, "noise_psd");
  s.pathloss_ref_gain = number(j, "pathloss_ref_gain");
  s.pathloss_exponent = number(j, "pathloss_exponent");
  s.epsilon = number(j, "epsilon");
  s.tx_probability = number(j, "tx_probability");
  s.jam_price = number(j, "jam_price");
  s.budget = number(j, "budget");
  s.model_size_bits = number(j, "model_size_bits");
  s.local_iter_coeff = number(j, "local_iter_coeff");
  s.global_iter_coeff = number(j, "global_iter_coeff");
  const auto seed = integer(j, "seed");
  if (seed < 0) throw ConfigError("seed", "must be >= 0");
  s.seed = static_cast<std::uint64_t>(seed);
  validate(s);
  return s;
}

inline Scenario parse_scenario(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("parse error: ") + e.what());
  }
  return scenario_from_json(j);
}

inline std::string dump_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("<file>", "cannot write '" + path + "'");
  out << dump_scenario(s);
}

}  // namespace ccfl

#endif  // CCFL_SCENARIO_HPP
