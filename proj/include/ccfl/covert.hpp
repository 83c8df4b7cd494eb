#ifndef CCFL_COVERT_HPP
#define CCFL_COVERT_HPP

// Warden-side detection model.
//
// The warden runs a radiometer on one subchannel over one block. Warden-side
// links are Rayleigh faded, so the received jamming power J and device power S
// are independent exponentials with means mu_j and mu_s. With margin t above
// the noise floor the warden declares "transmitting" when the excess power
// exceeds t:
//
//   p_fa(t) = P(J > t)     = exp(-t / mu_j)
//   p_md(t) = P(J + S <= t) = hypoexponential CDF
//
// The error sum is minimised at t* = mu_j mu_s ln(mu_s/mu_j) / (mu_s - mu_j)
// and only depends on r = mu_s / mu_j:  xi*(r) = 1 - r^(-1/(r-1)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ccfl/allocation.hpp"
#include "ccfl/channel.hpp"
#include "ccfl/errors.hpp"
#include "ccfl/scenario.hpp"

namespace ccfl {

struct WardenObservationModel {
  double mu_j = 0.0;   // mean received jamming power (W)
  double mu_s = 0.0;   // mean received device power (W)
  double noise = 1.0;  // subchannel noise power (W)
};

struct DetectionReport {
  double p_fa = 0.0;
  double p_md = 0.0;
  double covert_prob = 0.0;  // p_fa + p_md
  double threshold = 0.0;    // warden's margin above the noise floor (W)

  friend bool operator==(const DetectionReport&, const DetectionReport&) = default;
};

inline constexpr double kEqualMeansRelTol = 1e-6;

namespace detail {

/// ln(r) / (r - 1), continuous through r = 1.
inline double log_ratio_over(double r) {
  const double x = r - 1.0;
  if (std::abs(x) < 1e-8) return 1.0 - x / 2.0 + x * x / 3.0;
  return std::log1p(x) / x;
}

inline bool nearly_equal(double a, double b) {
  return std::abs(a - b) < kEqualMeansRelTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace detail

/// CDF of Exp(mu1) + Exp(mu2) (means, not rates).
inline double hypo_exponential_cdf(double x, double mu1, double mu2) {
  if (!(mu1 > 0.0) || !(mu2 > 0.0))
    throw std::domain_error("hypo_exponential_cdf: means must be > 0");
  if (x <= 0.0) return 0.0;
  double cdf;
  if (detail::nearly_equal(mu1, mu2)) {
    const double mu = 0.5 * (mu1 + mu2);
    cdf = 1.0 - (1.0 + x / mu) * std::exp(-x / mu);
  } else {
    cdf = 1.0 - (mu1 * std::exp(-x / mu1) - mu2 * std::exp(-x / mu2)) / (mu1 - mu2);
  }
  return std::clamp(cdf, 0.0, 1.0);
}

inline double false_alarm(double t, const WardenObservationModel& m) {
  if (!(m.mu_j > 0.0)) throw std::domain_error("false_alarm: mu_j must be > 0");
  if (t < 0.0) throw std::domain_error("false_alarm: threshold must be >= 0");
  return std::exp(-t / m.mu_j);
}

inline double miss_detection(double t, const WardenObservationModel& m) {
  if (t < 0.0) throw std::domain_error("miss_detection: threshold must be >= 0");
  return hypo_exponential_cdf(t, m.mu_s, m.mu_j);
}

/// Margin t* minimising p_fa + p_md.
inline double optimal_threshold(const WardenObservationModel& m) {
  if (!(m.mu_j > 0.0) || !(m.mu_s > 0.0))
    throw std::domain_error("optimal_threshold: means must be > 0");
  const double r = m.mu_s / m.mu_j;
  return m.mu_s * detail::log_ratio_over(r);
}

/// Minimum achievable p_fa + p_md as a function of r = mu_s / mu_j.
inline double detection_error_floor(double r) {
  if (!(r > 0.0)) throw std::domain_error("detection_error_floor: ratio must be > 0");
  if (std::isinf(r)) return 0.0;
  return -std::expm1(-detail::log_ratio_over(r));
}

/// Largest ratio r with detection_error_floor(r) >= 1 - epsilon.
/// epsilon = 1 is unconstrained and returns +inf.
inline double max_covert_ratio(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::domain_error("max_covert_ratio: epsilon must lie in [0, 1]");
  if (epsilon == 0.0) throw InfeasibleError("CC constraint", "epsilon = 0: only silence is covert");
  if (epsilon == 1.0) return std::numeric_limits<double>::infinity();

  const double target = 1.0 - epsilon;
  auto feasible = [&](double r) { return detection_error_floor(r) >= target; };

  double lo = 1.0;
  double hi = 1.0;
  if (feasible(1.0)) {
    while (feasible(hi)) {
      lo = hi;
      hi *= 2.0;
    }
  } else {
    while (!feasible(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo < std::numeric_limits<double>::min())
        throw InfeasibleError("CC constraint", "epsilon too small to represent");
    }
  }
  // Invariant: feasible(lo) && !feasible(hi). Bisect down to adjacent doubles.
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

/// Largest device power meeting the covert constraint against jamming p_j.
inline double covert_power_cap(std::size_t i, double p_j, double epsilon, const ChannelSet& ch) {
  if (p_j < 0.0) throw std::domain_error("covert_power_cap: p_j must be >= 0");
  const double r_max = max_covert_ratio(epsilon);
  if (std::isinf(r_max)) return r_max;
  return r_max * (p_j / ch.n()) * ch.g_jammer_warden / ch.g_device_warden.at(i);
}

inline WardenObservationModel warden_model(std::size_t i, double p_i, double p_j,
                                           const ChannelSet& ch) {
  WardenObservationModel m;
  m.mu_j = (p_j / ch.n()) * ch.g_jammer_warden;
  m.mu_s = p_i * ch.g_device_warden.at(i);
  m.noise = ch.noise_power_subchannel;
  return m;
}

/// Warden-optimal detection report, including the degenerate cases: a silent
/// device is perfectly covert, an unjammed transmitting device is not at all.
inline DetectionReport evaluate_detection(const WardenObservationModel& m) {
  DetectionReport rep;
  if (m.mu_s <= 0.0) {
    rep.threshold = m.mu_j;
    rep.p_fa = m.mu_j > 0.0 ? std::exp(-1.0) : 0.0;
    rep.p_md = 1.0 - rep.p_fa;
  } else if (m.mu_j <= 0.0) {
    rep.threshold = 0.0;
    rep.p_fa = 0.0;
    rep.p_md = 0.0;
  } else {
    rep.threshold = optimal_threshold(m);
    rep.p_fa = false_alarm(rep.threshold, m);
    rep.p_md = miss_detection(rep.threshold, m);
  }
  rep.covert_prob = rep.p_fa + rep.p_md;
  return rep;
}

inline std::vector<DetectionReport> device_detections(const Allocation& a, const ChannelSet& ch) {
  std::vector<DetectionReport> out;
  out.reserve(ch.size());
  for (std::size_t i = 0; i < ch.size(); ++i)
    out.push_back(evaluate_detection(warden_model(i, a.device_powers.at(i), a.jam_power, ch)));
  return out;
}

/// xi*(r_i) for one device; 1 when silent, 0 when transmitting unjammed.
inline double device_covert_probability(std::size_t i, double p_i, double p_j,
                                        const ChannelSet& ch) {
  if (p_i <= 0.0) return 1.0;
  if (p_j <= 0.0) return 0.0;
  const auto m = warden_model(i, p_i, p_j, ch);
  return detection_error_floor(m.mu_s / m.mu_j);
}

/// Network covertness: the least covert device.
inline double network_covert_probability(const Allocation& a, const Scenario& s,
                                         const ChannelSet& ch) {
  if (a.device_powers.size() != s.size())
    throw std::invalid_argument("network_covert_probability: allocation size mismatch");
  double worst = 1.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    worst = std::min(worst, device_covert_probability(i, a.device_powers[i], a.jam_power, ch));
  return worst;
}

}  // namespace ccfl

#endif  // CCFL_COVERT_HPP
