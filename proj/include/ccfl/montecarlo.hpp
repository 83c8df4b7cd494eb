#ifndef CCFL_MONTECARLO_HPP
#define CCFL_MONTECARLO_HPP

// Stochastic checks of the closed forms and a toy federated-averaging run.
//
// Detection trials are cut into fixed-size chunks; chunk k always draws from
// substream k of the seed, so merged counts do not depend on how many workers
// processed the chunks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "ccfl/allocation.hpp"
#include "ccfl/covert.hpp"
#include "ccfl/latency.hpp"
#include "ccfl/rng.hpp"
#include "ccfl/scenario.hpp"

namespace ccfl {

inline constexpr std::size_t kMinDetectionTrials = 10'000;
inline constexpr std::size_t kTrialChunk = 1u << 16;

struct McReport {
  std::size_t trials = 0;  // per hypothesis
  double empirical_p_fa = 0.0;
  double empirical_p_md = 0.0;
  double empirical_covert = 0.0;
  double std_error_fa = 0.0;
  double std_error_md = 0.0;
  double std_error = 0.0;    // of empirical_covert
  DetectionReport analytic;  // closed forms at the simulated threshold

  friend bool operator==(const McReport&, const McReport&) = default;
};

struct TrafficReport {
  std::size_t trials = 0;
  std::size_t transmissions = 0;
  double empirical_p_fa = 0.0;  // among silent trials
  double empirical_p_md = 0.0;  // among transmitting trials
  double total_error = 0.0;     // fraction of trials the warden got wrong
  double analytic_total = 0.0;  // alpha * p_md + (1 - alpha) * p_fa
  double std_error = 0.0;
  double threshold = 0.0;
};

namespace detail {

inline double binomial_se(double p, std::size_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

inline void require_trials(std::size_t trials) {
  if (trials < kMinDetectionTrials)
    throw std::invalid_argument("Monte Carlo needs at least 10000 trials");
}

inline void require_model(const WardenObservationModel& m) {
  if (!(m.mu_j > 0.0) || !(m.mu_s > 0.0) || !(m.noise > 0.0))
    throw std::domain_error("Monte Carlo: observation model needs mu_j, mu_s, noise > 0");
}

// Runs body(chunk_index, count) -> Counts over all chunks and sums
// the results. Counts must provide operator+=.
template <class Counts, class Body>
Counts run_chunks(std::size_t trials, unsigned jobs, Body body) {
  const std::size_t n_chunks = (trials + kTrialChunk - 1) / kTrialChunk;
  std::vector<Counts> partial(n_chunks);
  auto work = [&](std::size_t first_chunk, std::size_t stride) {
    for (std::size_t c = first_chunk; c < n_chunks; c += stride) {
      const std::size_t begin = c * kTrialChunk;
      partial[c] = body(c, std::min(kTrialChunk, trials - begin));
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_chunks)));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w, jobs);
  }
  Counts total{};
  for (const auto& p : partial) total += p;
  return total;
}

struct DetectionCounts {
  std::size_t false_alarms = 0;
  std::size_t misses = 0;
  DetectionCounts& operator+=(const DetectionCounts& o) {
    false_alarms += o.false_alarms;
    misses += o.misses;
    return *this;
  }
};

struct TrafficCounts {
  std::size_t transmissions = 0;
  std::size_t false_alarms = 0;
  std::size_t misses = 0;
  TrafficCounts& operator+=(const TrafficCounts& o) {
    transmissions += o.transmissions;
    false_alarms += o.false_alarms;
    misses += o.misses;
    return *this;
  }
};

}  // namespace detail

/// Radiometer simulation: `trials` draws under each hypothesis. The warden
/// declares "transmitting" when observed power exceeds noise + threshold.
inline McReport simulate_detection(const WardenObservationModel& m, double threshold,
                                   std::size_t trials, std::uint64_t seed, unsigned jobs = 1) {
  detail::require_trials(trials);
  detail::require_model(m);
  if (threshold < 0.0) throw std::domain_error("simulate_detection: threshold must be >= 0");

  const double decision = m.noise + threshold;
  auto counts = detail::run_chunks<detail::DetectionCounts>(
      trials, jobs, [&](std::size_t chunk, std::size_t n) {
        Engine rng = make_engine(seed, Stream::fading, static_cast<std::uint32_t>(chunk));
        std::exponential_distribution<double> jam(1.0 / m.mu_j);
        std::exponential_distribution<double> sig(1.0 / m.mu_s);
        detail::DetectionCounts c;
        for (std::size_t k = 0; k < n; ++k) {
          const double h0 = m.noise + jam(rng);
          const double h1 = m.noise + jam(rng) + sig(rng);
          if (h0 > decision) ++c.false_alarms;
          if (!(h1 > decision)) ++c.misses;
        }
        return c;
      });

  McReport rep;
  rep.trials = trials;
  const double n = static_cast<double>(trials);
  rep.empirical_p_fa = static_cast<double>(counts.false_alarms) / n;
  rep.empirical_p_md = static_cast<double>(counts.misses) / n;
  rep.empirical_covert = rep.empirical_p_fa + rep.empirical_p_md;
  rep.analytic.threshold = threshold;
  rep.analytic.p_fa = false_alarm(threshold, m);
  rep.analytic.p_md = miss_detection(threshold, m);
  rep.analytic.covert_prob = rep.analytic.p_fa + rep.analytic.p_md;
  rep.std_error_fa = detail::binomial_se(rep.analytic.p_fa, trials);
  rep.std_error_md = detail::binomial_se(rep.analytic.p_md, trials);
  rep.std_error = std::hypot(rep.std_error_fa, rep.std_error_md);
  return rep;
}

/// Probabilistic traffic: every trial the device transmits with probability
/// alpha and the warden applies its prior-free optimal threshold. The
/// prior-weighted total error reported here complements, and does not
/// replace, the prior-free covert probability p_fa + p_md.
inline TrafficReport simulate_traffic_detection(const WardenObservationModel& m, double alpha,
                                                std::size_t trials, std::uint64_t seed,
                                                unsigned jobs = 1) {
  detail::require_trials(trials);
  detail::require_model(m);
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("simulate_traffic_detection: alpha must lie in (0, 1]");

  const double threshold = optimal_threshold(m);
  const double decision = m.noise + threshold;
  auto counts = detail::run_chunks<detail::TrafficCounts>(
      trials, jobs, [&](std::size_t chunk, std::size_t n) {
        Engine fading = make_engine(seed, Stream::fading, static_cast<std::uint32_t>(chunk));
        Engine traffic = make_engine(seed, Stream::traffic, static_cast<std::uint32_t>(chunk));
        std::bernoulli_distribution transmit(alpha);
        std::exponential_distribution<double> jam(1.0 / m.mu_j);
        std::exponential_distribution<double> sig(1.0 / m.mu_s);
        detail::TrafficCounts c;
        for (std::size_t k = 0; k < n; ++k) {
          const bool tx = transmit(traffic);
          double observed = m.noise + jam(fading);
          if (tx) {
            ++c.transmissions;
            observed += sig(fading);
            if (!(observed > decision)) ++c.misses;
          } else if (observed > decision) {
            ++c.false_alarms;
          }
        }
        return c;
      });

  TrafficReport rep;
  rep.trials = trials;
  rep.threshold = threshold;
  rep.transmissions = counts.transmissions;
  const std::size_t silent = trials - counts.transmissions;
  rep.empirical_p_md = counts.transmissions
                           ? static_cast<double>(counts.misses) / counts.transmissions
                           : 0.0;
  rep.empirical_p_fa = silent ? static_cast<double>(counts.false_alarms) / silent : 0.0;
  rep.total_error =
      static_cast<double>(counts.misses + counts.false_alarms) / static_cast<double>(trials);
  rep.analytic_total = alpha * miss_detection(threshold, m) + (1.0 - alpha) * false_alarm(threshold, m);
  rep.std_error = detail::binomial_se(rep.analytic_total, trials);
  return rep;
}

// --- toy federated averaging ----------------------------------------------

struct FedAvgOptions {
  double class_offset = 3.0;  // class means at +-offset on every coordinate
  double learning_rate = 0.1;
  std::size_t test_samples = 2000;
};

struct FedAvgTrace {
  std::size_t rounds = 0;
  std::vector<double> global_loss_per_round;
  std::vector<double> global_accuracy_per_round;
  std::vector<std::size_t> transmissions_per_round;
  std::size_t local_steps = 0;
  bool reached_target = false;
};

namespace detail {

inline constexpr std::size_t kFeatures = 2;

struct Dataset {
  std::vector<std::array<double, kFeatures>> x;
  std::vector<double> y;  // 0 or 1
};

// Logistic-regression weights; the last entry is the bias.
using Weights = std::array<double, kFeatures + 1>;

inline Dataset make_blobs(std::size_t n, double offset, Engine& rng) {
  std::bernoulli_distribution label(0.5);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset d;
  d.x.reserve(n);
  d.y.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const bool positive = label(rng);
    const double mean = positive ? offset : -offset;
    std::array<double, kFeatures> xi{};
    for (auto& v : xi) v = mean + noise(rng);
    d.x.push_back(xi);
    d.y.push_back(positive ? 1.0 : 0.0);
  }
  return d;
}

inline double logit(const Weights& w, const std::array<double, kFeatures>& x) {
  double z = w[kFeatures];
  for (std::size_t f = 0; f < kFeatures; ++f) z += w[f] * x[f];
  return z;
}

inline void gradient_step(Weights& w, const Dataset& d, double lr) {
  Weights g{};
  for (std::size_t k = 0; k < d.y.size(); ++k) {
    const double p = 1.0 / (1.0 + std::exp(-logit(w, d.x[k])));
    const double err = p - d.y[k];
    for (std::size_t f = 0; f < kFeatures; ++f) g[f] += err * d.x[k][f];
    g[kFeatures] += err;
  }
  const double scale = lr / static_cast<double>(d.y.size());
  for (std::size_t f = 0; f <= kFeatures; ++f) w[f] -= scale * g[f];
}

inline std::pair<double, double> evaluate(const Weights& w, const Dataset& d) {
  double loss = 0.0;
  std::size_t correct = 0;
  for (std::size_t k = 0; k < d.y.size(); ++k) {
    const double z = logit(w, d.x[k]);
    // log(1 + e^z) - y z, evaluated stably.
    loss += std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))) - d.y[k] * z;
    if ((z > 0.0) == (d.y[k] > 0.5)) ++correct;
  }
  const double n = static_cast<double>(d.y.size());
  return {loss / n, static_cast<double>(correct) / n};
}

}  // namespace detail

/// Federated averaging of a logistic-regression model on synthetic two-blob
/// data. Each round every device runs ceil(local_iterations(eta)) full-batch
/// gradient steps from the global model, uploads with probability
/// tx_probability, and the server averages the received models weighted by
/// sample count. Silent devices simply do not contribute that round.
inline FedAvgTrace run_fedavg_demo(const Scenario& s, const Allocation& alloc,
                                   double target_accuracy, std::size_t max_rounds,
                                   std::uint64_t seed, const FedAvgOptions& opt = {}) {
  FedAvgTrace trace;
  trace.local_steps = static_cast<std::size_t>(
      std::ceil(local_iterations(alloc.local_accuracy, s.local_iter_coeff)));
  if (max_rounds == 0) return trace;

  const std::size_t n = s.size();
  std::vector<detail::Dataset> local;
  local.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Engine rng = make_engine(seed, Stream::data, static_cast<std::uint32_t>(i));
    local.push_back(detail::make_blobs(static_cast<std::size_t>(s.devices[i].samples),
                                       opt.class_offset, rng));
  }
  Engine test_rng = make_engine(seed, Stream::data, static_cast<std::uint32_t>(n));
  const detail::Dataset test = detail::make_blobs(opt.test_samples, opt.class_offset, test_rng);

  Engine traffic = make_engine(seed, Stream::traffic);
  std::bernoulli_distribution transmit(s.tx_probability);

  detail::Weights global{};
  for (std::size_t round = 0; round < max_rounds; ++round) {
    detail::Weights sum{};
    double weight = 0.0;
    std::size_t received = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!transmit(traffic)) continue;
      detail::Weights w = global;
      for (std::size_t step = 0; step < trace.local_steps; ++step)
        detail::gradient_step(w, local[i], opt.learning_rate);
      const double d = static_cast<double>(s.devices[i].samples);
      for (std::size_t f = 0; f < w.size(); ++f) sum[f] += d * w[f];
      weight += d;
      ++received;
    }
    if (received > 0) {
      for (std::size_t f = 0; f < global.size(); ++f) global[f] = sum[f] / weight;
    }
    const auto [loss, acc] = detail::evaluate(global, test);
    trace.global_loss_per_round.push_back(loss);
    trace.global_accuracy_per_round.push_back(acc);
    trace.transmissions_per_round.push_back(received);
    trace.rounds = round + 1;
    if (acc >= target_accuracy) {
      trace.reached_target = true;
      break;
    }
  }
  return trace;
}

}  // namespace ccfl

#endif  // CCFL_MONTECARLO_HPP
