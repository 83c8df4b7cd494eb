#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <set>
#include <string>

#include "ccfl/scenario.hpp"

using namespace ccfl;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ccfl_" + name)).string();
}

ConfigError parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ConfigError";
  return ConfigError("", "");
}

}  // namespace

TEST(DbmToWatts, Definition) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(10.0), 0.01);
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_DOUBLE_EQ(dbm_to_watts(0.0), 0.001);
}

TEST(GenerateScenario, PaperFig3Preset) {
  const Scenario s = generate_scenario(paper_fig3_preset(), 7);
  EXPECT_EQ(s.size(), 50u);
  EXPECT_DOUBLE_EQ(s.epsilon, 0.1);
  EXPECT_DOUBLE_EQ(s.total_bandwidth, 20e6);
  EXPECT_DOUBLE_EQ(s.tx_probability, 0.7);
  EXPECT_DOUBLE_EQ(s.jam_price, 0.5);
  EXPECT_DOUBLE_EQ(s.budget, 30.0);
  EXPECT_DOUBLE_EQ(s.area_side, 500.0);
  for (const auto& d : s.devices) {
    EXPECT_DOUBLE_EQ(d.max_power, 0.01);
    EXPECT_EQ(d.samples, 500);
    EXPECT_DOUBLE_EQ(d.cpu_freq, 2e9);
  }
}

TEST(GenerateScenario, SingleDevice) {
  const Scenario s = generate_scenario(1, 500.0, 0);
  ASSERT_EQ(s.size(), 1u);
  const auto& p = s.devices[0].position;
  EXPECT_GE(p.x, 0.0);
  EXPECT_LE(p.x, 500.0);
  EXPECT_GE(p.y, 0.0);
  EXPECT_LE(p.y, 500.0);
}

TEST(GenerateScenario, DeterministicPerSeed) {
  const Scenario a = generate_scenario(50, 500.0, 7);
  const Scenario b = generate_scenario(50, 500.0, 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(dump_scenario(a), dump_scenario(b));
}

TEST(GenerateScenario, DifferentSeedsDiffer) {
  std::set<std::size_t> hashes;
  for (std::uint64_t seed : {1, 2, 3, 4})
    hashes.insert(std::hash<std::string>{}(dump_scenario(generate_scenario(50, 500.0, seed))));
  EXPECT_EQ(hashes.size(), 4u);
}

TEST(GenerateScenario, LargerNExtendsSmallerN) {
  const Scenario small = generate_scenario(10, 500.0, 3);
  const Scenario large = generate_scenario(30, 500.0, 3);
  EXPECT_EQ(small.jammer_pos, large.jammer_pos);
  EXPECT_EQ(small.warden_pos, large.warden_pos);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small.devices[i], large.devices[i]);
}

TEST(GenerateScenario, PositionsStayInsideSquare) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Scenario s = generate_scenario(5, 250.0, seed);
    auto inside = [](const Position& p) {
      return p.x >= 0.0 && p.x <= 250.0 && p.y >= 0.0 && p.y <= 250.0;
    };
    ASSERT_TRUE(inside(s.jammer_pos)) << seed;
    ASSERT_TRUE(inside(s.warden_pos)) << seed;
    for (const auto& d : s.devices) ASSERT_TRUE(inside(d.position)) << seed;
  }
}

TEST(GenerateScenario, RejectsBadArguments) {
  EXPECT_THROW(generate_scenario(0, 500.0, 1), std::invalid_argument);
  EXPECT_THROW(generate_scenario(3, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(generate_scenario(3, -5.0, 1), std::invalid_argument);
}

TEST(LoadScenario, RoundTripsGeneratedScenarios) {
  const std::string path = temp_path("roundtrip.json");
  for (std::uint64_t seed : {0, 7, 123456789}) {
    const Scenario s = generate_scenario(paper_fig3_preset(), seed);
    save_scenario(s, path);
    EXPECT_EQ(load_scenario(path), s);
  }
  std::filesystem::remove(path);
}

TEST(LoadScenario, CommittedExampleLoads) {
  const Scenario s = load_scenario(std::string(CCFL_SOURCE_DIR) + "/configs/paper-fig3-seed7.json");
  EXPECT_EQ(s, generate_scenario(paper_fig3_preset(), 7));
}

TEST(LoadScenario, EpsilonOutOfRangeNamesField) {
  auto j = to_json(generate_scenario(3, 100.0, 1));
  j["epsilon"] = 1.5;
  EXPECT_EQ(parse_error(j.dump()).field(), "epsilon");
}

TEST(LoadScenario, MissingBudgetNamesField) {
  auto j = to_json(generate_scenario(3, 100.0, 1));
  j.erase("budget");
  const auto e = parse_error(j.dump());
  EXPECT_EQ(e.field(), "budget");
  EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
}

TEST(LoadScenario, NestedFieldErrorsCarryPath) {
  auto j = to_json(generate_scenario(3, 100.0, 1));
  j["devices"][1].erase("cpu_freq");
  EXPECT_EQ(parse_error(j.dump()).field(), "devices[1].cpu_freq");

  j = to_json(generate_scenario(3, 100.0, 1));
  j["devices"][0]["samples"] = 0;
  EXPECT_EQ(parse_error(j.dump()).field(), "devices.samples");

  j = to_json(generate_scenario(3, 100.0, 1));
  j["warden_pos"]["x"] = 1000.0;
  EXPECT_EQ(parse_error(j.dump()).field(), "warden_pos");
}

TEST(LoadScenario, ParseFailure) {
  EXPECT_EQ(parse_error("{ not json").field(), "<document>");
  EXPECT_THROW(load_scenario("/nonexistent/ccfl.json"), ConfigError);
}

TEST(Presets, LookupByName) {
  EXPECT_EQ(find_preset("paper-fig3").n_devices, 50u);
  EXPECT_THROW(find_preset("nope"), ConfigError);
}
