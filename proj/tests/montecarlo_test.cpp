#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ccfl/montecarlo.hpp"

using namespace ccfl;

namespace {

WardenObservationModel ratio_model(double r) { return {1.0, r, 1e-3}; }

Scenario fedavg_fixture(double alpha = 0.7) {
  Scenario s = generate_scenario(10, 500.0, 2024);
  s.tx_probability = alpha;
  return s;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST(SimulateDetection, RatioTwoAtOptimalThreshold) {
  const auto m = ratio_model(2.0);
  const auto rep = simulate_detection(m, optimal_threshold(m), 1'000'000, 11);
  EXPECT_NEAR(rep.empirical_covert, 0.5, 3.0 * rep.std_error);
  EXPECT_NEAR(rep.empirical_p_fa, 0.25, 3.0 * rep.std_error_fa);
  EXPECT_NEAR(rep.empirical_p_md, 0.25, 3.0 * rep.std_error_md);
  EXPECT_NEAR(rep.analytic.covert_prob, 0.5, 1e-14);
}

TEST(SimulateDetection, ZeroThreshold) {
  const auto rep = simulate_detection(ratio_model(1.0), 0.0, 10'000, 1);
  EXPECT_NEAR(rep.empirical_p_fa, 1.0, 1e-3);
  EXPECT_NEAR(rep.empirical_p_md, 0.0, 1e-3);
}

TEST(SimulateDetection, DeterministicAndScheduleIndependent) {
  const auto m = ratio_model(0.5);
  const double t = optimal_threshold(m);
  const auto a = simulate_detection(m, t, 300'000, 5, 1);
  const auto b = simulate_detection(m, t, 300'000, 5, 1);
  const auto c = simulate_detection(m, t, 300'000, 5, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a.empirical_covert, simulate_detection(m, t, 300'000, 6).empirical_covert);
}

TEST(SimulateDetection, RejectsTooFewTrials) {
  EXPECT_THROW(simulate_detection(ratio_model(1.0), 1.0, 1000, 1), std::invalid_argument);
  EXPECT_THROW(simulate_detection(ratio_model(1.0), -1.0, 10'000, 1), std::domain_error);
}

TEST(SimulateDetection, AgreesWithClosedFormsOverRatioGrid) {
  for (double r : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto m = ratio_model(r);
    const auto rep = simulate_detection(m, optimal_threshold(m), 1'000'000, 100);
    EXPECT_NEAR(rep.empirical_covert, detection_error_floor(r), 3.0 * rep.std_error) << r;
    EXPECT_NEAR(rep.empirical_p_fa, rep.analytic.p_fa, 3.0 * rep.std_error_fa) << r;
    EXPECT_NEAR(rep.empirical_p_md, rep.analytic.p_md, 3.0 * rep.std_error_md) << r;
  }
}

TEST(SimulateDetection, PerturbedThresholdDoesNotHelpWarden) {
  for (double r : {0.5, 2.0, 8.0}) {
    const auto m = ratio_model(r);
    const double t = optimal_threshold(m);
    const auto at_opt = simulate_detection(m, t, 1'000'000, 7);
    for (double f : {0.9, 1.1}) {
      const auto moved = simulate_detection(m, f * t, 1'000'000, 8);
      EXPECT_GE(moved.empirical_covert, at_opt.empirical_covert - 3.0 * at_opt.std_error) << r;
    }
  }
}

TEST(SimulateTraffic, AlwaysTransmitting) {
  const auto rep = simulate_traffic_detection(ratio_model(2.0), 1.0, 200'000, 3);
  EXPECT_EQ(rep.transmissions, rep.trials);
  EXPECT_DOUBLE_EQ(rep.total_error, rep.empirical_p_md);
}

TEST(SimulateTraffic, PriorWeightedErrorAtRatioTwo) {
  const auto rep = simulate_traffic_detection(ratio_model(2.0), 0.7, 1'000'000, 4);
  EXPECT_NEAR(rep.analytic_total, 0.25, 1e-14);
  EXPECT_NEAR(rep.total_error, 0.25, 3.0 * rep.std_error);
}

TEST(SimulateTraffic, EvenPriorAveragesBothErrors) {
  const auto m = ratio_model(4.0);
  const double t = optimal_threshold(m);
  const double mean = 0.5 * (false_alarm(t, m) + miss_detection(t, m));
  const auto rep = simulate_traffic_detection(m, 0.5, 1'000'000, 9);
  EXPECT_NEAR(rep.analytic_total, mean, 1e-15);
  EXPECT_NEAR(rep.total_error, mean, 3.0 * rep.std_error);
  EXPECT_THROW(simulate_traffic_detection(m, 0.0, 10'000, 1), std::domain_error);
}

// Regression fixture: separable blobs (+-3), N = 10, eta = 0.5, alpha = 0.7.
TEST(FedAvgDemo, FixtureReachesTarget) {
  const Scenario s = fedavg_fixture();
  const Allocation a{std::vector<double>(s.size(), 0.01), 10.0, 0.5};
  const auto trace = run_fedavg_demo(s, a, 0.95, 50, 2024);
  EXPECT_TRUE(trace.reached_target);
  EXPECT_LE(trace.rounds, 50u);
  EXPECT_EQ(trace.local_steps, 10u);
  ASSERT_EQ(trace.global_accuracy_per_round.size(), trace.rounds);
  ASSERT_EQ(trace.global_loss_per_round.size(), trace.rounds);
  ASSERT_EQ(trace.transmissions_per_round.size(), trace.rounds);
  EXPECT_GE(trace.global_accuracy_per_round.back(), 0.95);
  for (double acc : trace.global_accuracy_per_round) {
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
  }
  for (auto tx : trace.transmissions_per_round) EXPECT_LE(tx, s.size());
}

TEST(FedAvgDemo, ZeroRoundsIsFlaggedEmpty) {
  const Scenario s = fedavg_fixture();
  const Allocation a{std::vector<double>(s.size(), 0.01), 10.0, 0.5};
  const auto trace = run_fedavg_demo(s, a, 0.95, 0, 1);
  EXPECT_EQ(trace.rounds, 0u);
  EXPECT_TRUE(trace.global_accuracy_per_round.empty());
  EXPECT_FALSE(trace.reached_target);
}

TEST(FedAvgDemo, Deterministic) {
  const Scenario s = fedavg_fixture();
  const Allocation a{std::vector<double>(s.size(), 0.01), 10.0, 0.5};
  const auto x = run_fedavg_demo(s, a, 2.0, 5, 77);
  const auto y = run_fedavg_demo(s, a, 2.0, 5, 77);
  EXPECT_EQ(x.global_loss_per_round, y.global_loss_per_round);
  EXPECT_EQ(x.transmissions_per_round, y.transmissions_per_round);
}

// Harder variant (overlapping blobs, one local step per round) so the round
// count actually depends on participation.
TEST(FedAvgDemo, FullParticipationIsNoSlower) {
  FedAvgOptions opt;
  opt.class_offset = 0.4;
  opt.learning_rate = 0.05;
  std::vector<double> full, partial;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Allocation a{std::vector<double>(10, 0.01), 10.0, 0.95};
    const auto one = run_fedavg_demo(fedavg_fixture(1.0), a, 0.64, 200, seed, opt);
    const auto most = run_fedavg_demo(fedavg_fixture(0.7), a, 0.64, 200, seed, opt);
    full.push_back(static_cast<double>(one.rounds));
    partial.push_back(static_cast<double>(most.rounds));
  }
  EXPECT_LE(median(full), median(partial));
}

TEST(FedAvgDemo, LossFallsOverTraining) {
  FedAvgOptions opt;
  opt.class_offset = 0.5;
  opt.learning_rate = 0.05;
  std::vector<double> first, last;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Allocation a{std::vector<double>(10, 0.01), 10.0, 0.9};
    const auto trace = run_fedavg_demo(fedavg_fixture(), a, 2.0, 20, seed, opt);
    ASSERT_EQ(trace.rounds, 20u);
    first.push_back(trace.global_loss_per_round.front());
    last.push_back(trace.global_loss_per_round.back());
  }
  EXPECT_LT(median(last), median(first));
}
