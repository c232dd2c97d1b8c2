#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>

#include "adhs/config.hpp"
#include "adhs/report_io.hpp"
#include "adhs/sweep.hpp"

namespace adhs {
namespace {

std::string error_of(const json& user, const std::vector<std::string>& ov = {}) {
  try {
    load_config_document(user, ov);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, EmptyDocumentIsCustomDefaults) {
  const auto c = load_config_document(json::object(), {});
  EXPECT_EQ(c.preset, "custom");
  EXPECT_EQ(c.k, 4u);
}

TEST(Config, PresetRoundTrips) {
  for (const char* p : {"fig3", "kruger", "uniform_random", "custom"}) {
    const auto c = preset_config(p, 7);
    EXPECT_EQ(to_json(from_json(to_json(c))), to_json(c)) << p;
  }
}

TEST(Config, OverridesApply) {
  const auto c = load_config_document({{"preset", "fig3"}}, {"T=3.5", "L=7", "adhs.literal_mode=true", "seed=99"});
  EXPECT_EQ(c.adhs.t_threshold, 3.5);
  EXPECT_EQ(c.adhs.l_limit, 7u);
  EXPECT_TRUE(c.adhs.literal_mode);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.deployment.kind, DeploymentKind::kFig3);
}

TEST(Config, InfinityAccepted) {
  const auto c = load_config_document(json::object(), {"T=inf", "battery_j=inf"});
  EXPECT_TRUE(std::isinf(c.adhs.t_threshold));
  EXPECT_TRUE(std::isinf(c.battery_j));
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_NE(error_of({{"bogus", 1}}).find("bogus"), std::string::npos);
  EXPECT_NE(error_of({{"adhs", {{"tt", 1}}}}).find("adhs.tt"), std::string::npos);
  EXPECT_NE(error_of(json::object(), {"L=0"}).find("l_limit"), std::string::npos);
  EXPECT_NE(error_of(json::object(), {"T=-1"}).find("t_threshold"), std::string::npos);
  EXPECT_NE(error_of(json::object(), {"alpha=2"}).find("alpha"), std::string::npos);
  EXPECT_NE(error_of(json::object(), {"rounds=\"many\""}).find("rounds"), std::string::npos);
  EXPECT_NE(error_of(json::object(), {"nope=1"}).find("nope"), std::string::npos);
  EXPECT_NE(error_of({{"preset", "mars"}}).find("mars"), std::string::npos);
  EXPECT_NE(error_of(json::object(), {"novalue"}).find("key=value"), std::string::npos);
}

TEST(Config, FileLoading) {
  const auto dir = std::filesystem::temp_directory_path() / "adhs_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "c.json";
  std::ofstream(path) << R"({"preset": "fig3", "adhs": {"l_limit": 3}})";
  EXPECT_EQ(load_config(path, {}).adhs.l_limit, 3u);
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_config(path, {}), ConfigError);
  EXPECT_THROW(load_config(dir / "missing.json", {}), ConfigError);
}

TEST(Config, RegionsParse) {
  const json user = {{"field",
                      {{"regions",
                        {{{"shape", "circle"}, {"cx", 1}, {"cy", 2}, {"r", 3}, {"timeline", {{0, 5}, {10, nullptr}}}}}}}}};
  const auto c = load_config_document(user, {});
  ASSERT_EQ(c.field.regions.size(), 1u);
  EXPECT_EQ(c.field.regions[0].timeline.at(3), 5.0);
  EXPECT_FALSE(c.field.regions[0].timeline.at(10));
  const json bad = {{"field", {{"regions", {{{"shape", "hex"}, {"timeline", json::array()}}}}}}};
  EXPECT_NE(error_of(bad).find("hex"), std::string::npos);
}

TEST(ReportIo, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-7), "1e-07");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(ReportIo, RunWritesOutputs) {
  const auto dir = std::filesystem::temp_directory_path() / "adhs_run_test";
  std::filesystem::remove_all(dir);
  const auto cfg = preset_config("fig3", 1);
  run_to_directory(cfg, dir, true);
  for (const char* f : {"trace.csv", "summary.json", "manifest.json", "hierarchy.json"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  std::ifstream trace(dir / "trace.csv");
  std::string header;
  std::getline(trace, header);
  EXPECT_EQ(header, kTraceHeader);
  std::size_t lines = 0;
  for (std::string l; std::getline(trace, l);) ++lines;
  EXPECT_EQ(lines, 5u * 17u);
  const auto manifest = read_json_file(dir / "manifest.json");
  EXPECT_EQ(to_json(from_json(manifest)), to_json(cfg));
  const auto summary = read_json_file(dir / "summary.json");
  EXPECT_EQ(summary["symbolic_before"]["text"], "16 E_r + 21 E_p + 5 αE_t");
  EXPECT_NEAR(summary["ep_savings"].get<double>(), 0.3095, 5e-5);
}

TEST(Sweep, RejectsUnknownParameter) {
  EXPECT_THROW(sweep("rounds", {json(1)}, preset_config("fig3", 1)), ConfigError);
}

TEST(Sweep, ThresholdReducesEnergy) {
  auto base = preset_config("uniform_random", 4);
  base.rounds = 60;
  const auto rows = sweep("T", {json(0), json(15), json(1e9)}, base);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_GE(rows[0].e_tot, rows[1].e_tot);
  EXPECT_GE(rows[1].e_tot, rows[2].e_tot);
  std::ostringstream os;
  write_sweep_csv(os, "T", rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "T,e_tot,lifetime,fidelity");
}

}  // namespace
}  // namespace adhs
