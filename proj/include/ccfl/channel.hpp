#ifndef CCFL_CHANNEL_HPP
#define CCFL_CHANNEL_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccfl/scenario.hpp"

namespace ccfl {

/// Average (path-loss only) link gains plus the per-device OFDMA subchannel.
struct ChannelSet {
  std::vector<double> g_device_bs;
  std::vector<double> g_device_warden;
  double g_jammer_bs = 0.0;
  double g_jammer_warden = 0.0;
  double subchannel_bandwidth = 0.0;    // Hz, B/N
  double noise_power_subchannel = 0.0;  // W, noise_psd * B/N

  std::size_t size() const noexcept { return g_device_bs.size(); }
  double n() const noexcept { return static_cast<double>(g_device_bs.size()); }
};

inline double pathloss_gain(double d, double ref_gain, double exponent) {
  if (!(d > 0.0)) throw std::domain_error("pathloss_gain: distance must be > 0");
  return ref_gain * std::pow(d, -exponent);
}

inline ChannelSet build_channels(const Scenario& s) {
  auto link = [&](const Position& a, const Position& b, const std::string& what) {
    const double d = distance(a, b);
    if (!(d > 0.0)) throw std::domain_error("build_channels: coincident positions (" + what + ")");
    return pathloss_gain(d, s.pathloss_ref_gain, s.pathloss_exponent);
  };

  ChannelSet ch;
  ch.g_device_bs.reserve(s.size());
  ch.g_device_warden.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& p = s.devices[i].position;
    ch.g_device_bs.push_back(link(p, s.bs_pos, "device " + std::to_string(i) + " / bs"));
    ch.g_device_warden.push_back(
        link(p, s.warden_pos, "device " + std::to_string(i) + " / warden"));
  }
  ch.g_jammer_bs = link(s.jammer_pos, s.bs_pos, "jammer / bs");
  ch.g_jammer_warden = link(s.jammer_pos, s.warden_pos, "jammer / warden");
  ch.subchannel_bandwidth = s.total_bandwidth / static_cast<double>(s.size());
  ch.noise_power_subchannel = s.noise_psd * ch.subchannel_bandwidth;
  return ch;
}

/// Barrage jamming: p_j is spread evenly, p_j/N lands on every subchannel.
inline double sinr_at_bs(std::size_t i, double p_i, double p_j, const ChannelSet& ch) {
  const double interference = (p_j / ch.n()) * ch.g_jammer_bs + ch.noise_power_subchannel;
  return p_i * ch.g_device_bs.at(i) / interference;
}

inline double uplink_rate(std::size_t i, double p_i, double p_j, const ChannelSet& ch) {
  return ch.subchannel_bandwidth * std::log1p(sinr_at_bs(i, p_i, p_j, ch)) / std::numbers::ln2;
}

}  // namespace ccfl

#endif  // CCFL_CHANNEL_HPP
