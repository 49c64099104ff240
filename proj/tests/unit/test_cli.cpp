#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(DRILLCOAX_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("dc_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("measure"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("--version"), 0);
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, MissingAndMalformedInputExitTwo) {
  const auto d = scratch("bad");
  EXPECT_EQ(run("measure --scan " + (d / "absent.csv").string()), 2);
  std::ofstream(d / "scan.csv") << "frame,x,z\n0,1.0,oops\n";
  std::ofstream(d / "scan.meta") << "frame_count = 4\npoints_per_frame = 1\naxis_distance_D = 150\ngamma = 5\n";
  EXPECT_EQ(run("measure --scan " + (d / "scan.csv").string()), 2);
  EXPECT_EQ(run("simulate --out-dir " + d.string() + " --set no_such_key=1"), 2);
}

TEST(Cli, SimulateMeasureRoundTrip) {
  const auto d = scratch("round");
  ASSERT_EQ(run("simulate --out-dir " + d.string() + " --set bend_amplitude=0.25 --set noise_sigma=0.003 --set seed=4"), 0);
  for (const char* f : {"scan.csv", "scan.meta", "truth.csv", "truth.json"}) EXPECT_TRUE(fs::exists(d / f)) << f;
  ASSERT_EQ(run("measure --scan " + (d / "scan.csv").string() + " --out " + (d / "report.json").string() +
                " --plots " + (d / "plots").string()),
            0);
  const auto report = json::parse(slurp(d / "report.json"));
  const auto truth = json::parse(slurp(d / "truth.json"));
  EXPECT_NEAR(report["coaxiality_mm"].get<double>(), truth["true_coaxiality"].get<double>(), 0.02);
  EXPECT_TRUE(fs::exists(d / "plots" / "deviation.csv"));

  ASSERT_EQ(run("segment --scan " + (d / "scan.csv").string() + " --out " + (d / "labels.csv").string() +
                " --model " + (d / "model.json").string()),
            0);
  EXPECT_NO_THROW(json::parse(slurp(d / "model.json")));
}

TEST(Cli, SimulateIsSeedDeterministic) {
  const auto a = scratch("seed_a"), b = scratch("seed_b"), c = scratch("seed_c");
  const std::string sets = " --set frame_count=60 --set points_per_frame=200 --set noise_sigma=0.003";
  ASSERT_EQ(run("simulate --out-dir " + a.string() + sets + " --set seed=7"), 0);
  ASSERT_EQ(run("simulate --out-dir " + b.string() + sets + " --set seed=7"), 0);
  ASSERT_EQ(run("simulate --out-dir " + c.string() + sets + " --set seed=8"), 0);
  EXPECT_EQ(slurp(a / "scan.csv"), slurp(b / "scan.csv"));
  EXPECT_NE(slurp(a / "scan.csv"), slurp(c / "scan.csv"));
}

TEST(Cli, CalibrationBlock) {
  const auto d = scratch("cal");
  ASSERT_EQ(run("simulate --out-dir " + d.string() + " --set calibration_block=true"), 0);
  ASSERT_EQ(run("calibrate --scan " + (d / "scan.csv").string() + " --out " + (d / "cal.json").string()), 0);
  const auto j = json::parse(slurp(d / "cal.json"));
  EXPECT_NEAR(j["D"].get<double>(), 150.0, 1e-9);
  EXPECT_TRUE(j["pass"].get<bool>());

  // A rolled block fails the ladder rule: domain failure, exit 1.
  const auto r = scratch("cal_roll");
  ASSERT_EQ(run("simulate --out-dir " + r.string() + " --set calibration_block=true --set block_roll_slope=0.004"), 0);
  EXPECT_EQ(run("calibrate --scan " + (r / "scan.csv").string()), 1);
}
