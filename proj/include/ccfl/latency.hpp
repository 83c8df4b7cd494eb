#ifndef CCFL_LATENCY_HPP
#define CCFL_LATENCY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccfl/allocation.hpp"
#include "ccfl/channel.hpp"
#include "ccfl/errors.hpp"
#include "ccfl/scenario.hpp"

namespace ccfl {

struct LatencyBreakdown {
  double local_iters = 0.0;
  double global_iters = 0.0;
  std::vector<double> per_device_compute;  // s, one local iteration
  std::vector<double> per_device_upload;   // s
  std::vector<double> per_device_round;    // s, local_iters * compute + upload
  double total = 0.0;                      // s, global_iters * max(round)
};

namespace detail {
inline void require_open_unit(double eta, const char* who) {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error(std::string(who) + ": local accuracy must lie in (0, 1)");
}
}  // namespace detail

/// nu * log2(1/eta), continuous (not rounded).
inline double local_iterations(double eta, double nu) {
  detail::require_open_unit(eta, "local_iterations");
  return -nu * std::log2(eta);
}

/// theta / (1 - eta).
inline double global_iterations(double eta, double theta) {
  detail::require_open_unit(eta, "global_iterations");
  return theta / (1.0 - eta);
}

/// Time of one local iteration on device i.
inline double compute_time(std::size_t i, const Scenario& s) {
  const auto& d = s.devices.at(i);
  if (d.samples < 1) throw std::domain_error("compute_time: device needs >= 1 sample");
  return d.cycles_per_sample * static_cast<double>(d.samples) / d.cpu_freq;
}

inline double upload_time(std::size_t i, const Allocation& a, const Scenario& s,
                          const ChannelSet& ch) {
  const double p_i = a.device_powers.at(i);
  if (!(p_i > 0.0))
    throw InfeasibleError("device power", "device " + std::to_string(i) + " cannot upload at zero power");
  return s.model_size_bits / uplink_rate(i, p_i, a.jam_power, ch);
}

inline LatencyBreakdown fl_latency(const Allocation& a, const Scenario& s, const ChannelSet& ch) {
  if (a.device_powers.size() != s.size())
    throw std::invalid_argument("fl_latency: allocation size mismatch");
  LatencyBreakdown lb;
  lb.local_iters = local_iterations(a.local_accuracy, s.local_iter_coeff);
  lb.global_iters = global_iterations(a.local_accuracy, s.global_iter_coeff);
  lb.per_device_compute.reserve(s.size());
  lb.per_device_upload.reserve(s.size());
  lb.per_device_round.reserve(s.size());
  double slowest = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double cmp = compute_time(i, s);
    const double up = upload_time(i, a, s, ch);
    const double round = lb.local_iters * cmp + up;
    lb.per_device_compute.push_back(cmp);
    lb.per_device_upload.push_back(up);
    lb.per_device_round.push_back(round);
    slowest = std::max(slowest, round);
  }
  lb.total = lb.global_iters * slowest;
  return lb;
}

/// Total latency only; same arithmetic as fl_latency without the breakdown.
inline double fl_latency_total(const Allocation& a, const Scenario& s, const ChannelSet& ch) {
  const double loc = local_iterations(a.local_accuracy, s.local_iter_coeff);
  double slowest = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    slowest = std::max(slowest, loc * compute_time(i, s) + upload_time(i, a, s, ch));
  return global_iterations(a.local_accuracy, s.global_iter_coeff) * slowest;
}

}  // namespace ccfl

#endif  // CCFL_LATENCY_HPP
