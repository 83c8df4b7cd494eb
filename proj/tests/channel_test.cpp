#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccfl/channel.hpp"

using namespace ccfl;

namespace {

// Two devices, unit noise, hand-set gains.
ChannelSet toy_channels() {
  ChannelSet ch;
  ch.g_device_bs = {1.0, 0.5};
  ch.g_device_warden = {1.0, 2.0};
  ch.g_jammer_bs = 1.0;
  ch.g_jammer_warden = 1.0;
  ch.subchannel_bandwidth = 1e6;
  ch.noise_power_subchannel = 1.0;
  return ch;
}

Scenario line_scenario() {
  Scenario s = generate_scenario(2, 100.0, 1);
  s.bs_pos = {50.0, 50.0};
  s.jammer_pos = {10.0, 10.0};
  s.warden_pos = {90.0, 90.0};
  s.devices[0].position = {51.0, 50.0};
  s.devices[1].position = {60.0, 50.0};
  return s;
}

}  // namespace

TEST(PathlossGain, ReferenceAndArithmetic) {
  EXPECT_DOUBLE_EQ(pathloss_gain(1.0, 1e-3, 3.0), 1e-3);
  EXPECT_NEAR(pathloss_gain(100.0, 1e-3, 3.0), 1e-9, 1e-24);
  EXPECT_NEAR(pathloss_gain(10.0, 1e-3, 3.0), 1e-6, 1e-21);
}

TEST(PathlossGain, RejectsZeroDistance) {
  EXPECT_THROW(pathloss_gain(0.0, 1e-3, 3.0), std::domain_error);
}

TEST(PathlossGain, MonotoneDecreasing) {
  double prev = pathloss_gain(0.5, 1e-3, 3.0);
  for (double d = 1.0; d < 1000.0; d *= 1.3) {
    const double g = pathloss_gain(d, 1e-3, 3.0);
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(BuildChannels, UnitDistanceGivesReferenceGain) {
  const Scenario s = line_scenario();
  const ChannelSet ch = build_channels(s);
  EXPECT_DOUBLE_EQ(ch.g_device_bs[0], s.pathloss_ref_gain);
  EXPECT_NEAR(ch.g_device_bs[1], s.pathloss_ref_gain / 1000.0, 1e-18);
}

TEST(BuildChannels, PaperPresetInvariants) {
  const Scenario s = generate_scenario(paper_fig3_preset(), 7);
  const ChannelSet ch = build_channels(s);
  ASSERT_EQ(ch.g_device_bs.size(), 50u);
  ASSERT_EQ(ch.g_device_warden.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_GT(ch.g_device_bs[i], 0.0);
    EXPECT_TRUE(std::isfinite(ch.g_device_bs[i]));
    EXPECT_GT(ch.g_device_warden[i], 0.0);
  }
  EXPECT_GT(ch.g_jammer_bs, 0.0);
  EXPECT_GT(ch.g_jammer_warden, 0.0);
  // Closer to the BS means larger gain.
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t k = 0; k < 50; ++k) {
      const double di = distance(s.devices[i].position, s.bs_pos);
      const double dk = distance(s.devices[k].position, s.bs_pos);
      if (di < dk) {
        EXPECT_GT(ch.g_device_bs[i], ch.g_device_bs[k]);
      }
    }
  }
  EXPECT_DOUBLE_EQ(ch.subchannel_bandwidth, 20e6 / 50.0);
  EXPECT_DOUBLE_EQ(ch.subchannel_bandwidth * 50.0, s.total_bandwidth);
  EXPECT_DOUBLE_EQ(ch.noise_power_subchannel, s.noise_psd * 20e6 / 50.0);
}

TEST(BuildChannels, DeviceOnWardenIsRejected) {
  Scenario s = line_scenario();
  s.devices[1].position = s.warden_pos;
  EXPECT_THROW(build_channels(s), std::domain_error);
}

TEST(SinrAtBs, Examples) {
  const ChannelSet ch = toy_channels();
  EXPECT_EQ(sinr_at_bs(0, 0.0, 3.0, ch), 0.0);
  // p_j = 0, p_i * g = noise.
  EXPECT_DOUBLE_EQ(sinr_at_bs(0, 1.0, 0.0, ch), 1.0);
  // Jammer contributes p_j / N = 1 on top of unit noise.
  EXPECT_DOUBLE_EQ(sinr_at_bs(0, 1.0, 2.0, ch), 0.5);
  EXPECT_LT(sinr_at_bs(1, 1.0, 4.0, ch), sinr_at_bs(1, 1.0, 2.0, ch));
}

TEST(SinrAtBs, JointScaling) {
  ChannelSet ch = toy_channels();
  const double base = sinr_at_bs(1, 0.7, 3.0, ch);
  for (double c : {0.1, 2.0, 17.0}) {
    ch.noise_power_subchannel = c;
    EXPECT_NEAR(sinr_at_bs(1, 0.7 * c, 3.0 * c, ch), base, 1e-14 * base);
  }
}

TEST(UplinkRate, Examples) {
  const ChannelSet ch = toy_channels();
  EXPECT_DOUBLE_EQ(uplink_rate(0, 1.0, 0.0, ch), 1e6);
  EXPECT_DOUBLE_EQ(uplink_rate(0, 0.0, 1.0, ch), 0.0);
  EXPECT_NEAR(uplink_rate(0, 3.0, 0.0, ch), 2e6, 1e-6);
}

TEST(UplinkRate, MonotoneInBothPowers) {
  const Scenario s = generate_scenario(paper_fig3_preset(), 11);
  const ChannelSet ch = build_channels(s);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> log_power(-6.0, 2.0);
  std::uniform_int_distribution<std::size_t> dev(0, s.size() - 1);
  for (int k = 0; k < 10000; ++k) {
    const std::size_t i = dev(rng);
    const double p_i = std::pow(10.0, log_power(rng));
    const double p_j = std::pow(10.0, log_power(rng));
    const double delta = std::pow(10.0, log_power(rng));
    const double r = uplink_rate(i, p_i, p_j, ch);
    ASSERT_GT(uplink_rate(i, p_i + delta, p_j, ch), r);
    ASSERT_LT(uplink_rate(i, p_i, p_j + delta, ch), r);
  }
}
