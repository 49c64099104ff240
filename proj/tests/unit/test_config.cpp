#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "drillcoax/config.hpp"
#include "drillcoax/error.hpp"

using namespace drillcoax;
namespace fs = std::filesystem;

namespace {

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars](const std::string& k) -> std::optional<std::string> {
    const auto it = vars.find(k);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

const EnvLookup kNoEnv = [](const std::string&) -> std::optional<std::string> { return std::nullopt; };

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(PipelineConfig, Defaults) {
  const auto c = load_pipeline_config(std::nullopt, {}, kNoEnv);
  EXPECT_EQ(c.theta_deg, 0.0);
  EXPECT_EQ(c.delta_z_s, 0.01);
  EXPECT_EQ(c.bin_width, 0.039);
  EXPECT_EQ(c.sor.k, 8);
  EXPECT_EQ(c.sor.std_multiplier, 3.0);
  EXPECT_NEAR(c.segmentation_options().em.sigma_floor, 0.039 / std::sqrt(12.0), 1e-15);
}

TEST(PipelineConfig, Layering) {
  const auto file = write_temp("dc_layer.cfg", "# comment\ntheta_deg = 10\ndelta_z_s=0.02\nsor_k=5\n");
  const auto env = env_of({{"DRILLCOAX_DELTA_Z_S", "0.03"}, {"DRILLCOAX_SOR_K", "6"}});
  const auto c = load_pipeline_config(file, {{"sor_k", "7"}}, env);
  EXPECT_EQ(c.theta_deg, 10.0);     // file
  EXPECT_EQ(c.delta_z_s, 0.03);     // environment beats file
  EXPECT_EQ(c.sor.k, 7);            // override beats environment
  fs::remove(file);
}

TEST(PipelineConfig, UnknownKeysRejectedEverywhere) {
  const auto file = write_temp("dc_unknown.cfg", "no_such_key = 1\n");
  EXPECT_THROW(load_pipeline_config(file, {}, kNoEnv), ConfigError);
  EXPECT_THROW(load_pipeline_config(std::nullopt, {{"thetadeg", "1"}}, kNoEnv), ConfigError);
  PipelineConfig c;
  EXPECT_THROW(set_option(c, "bogus", "1"), ConfigError);
  fs::remove(file);
}

TEST(PipelineConfig, BadValues) {
  EXPECT_THROW(load_pipeline_config(std::nullopt, {{"sor_k", "abc"}}, kNoEnv), ConfigError);
  EXPECT_THROW(load_pipeline_config(std::nullopt, {{"sor_k", "0"}}, kNoEnv), ConfigError);
  EXPECT_THROW(load_pipeline_config(std::nullopt, {{"delta_z_s", "-1"}}, kNoEnv), ConfigError);
  EXPECT_THROW(load_pipeline_config(std::nullopt, {{"sor_enabled", "maybe"}}, kNoEnv), ConfigError);
  EXPECT_THROW(load_pipeline_config(std::nullopt, {{"min_bimodality", "-2"}}, kNoEnv), ConfigError);
  EXPECT_THROW(load_pipeline_config(std::nullopt, {}, env_of({{"DRILLCOAX_BIN_WIDTH", "0"}})), ConfigError);
}

TEST(PipelineConfig, EveryKeyRoundTrips) {
  PipelineConfig c;
  for (const auto& key : option_keys(c)) EXPECT_NO_THROW(set_option(c, key, key == "sor_enabled" ? "true" : "3", "t"))
      << key;
}

TEST(SimulationConfig, PrefixAndKeys) {
  const auto env = env_of({{"DRILLCOAX_SIM_BEND_AMPLITUDE", "0.2"}, {"DRILLCOAX_BEND_AMPLITUDE", "0.4"}});
  const auto c = load_simulation_config(std::nullopt, {{"phi_deg", "30"}, {"seed", "9"}}, env);
  EXPECT_EQ(c.drill.bend.amplitude, 0.2);
  EXPECT_EQ(c.drill.bend.phi_deg, 30.0);
  EXPECT_EQ(c.scan.seed, 9u);
  EXPECT_EQ(c.block_scan.seed, 9u);
  EXPECT_THROW(load_simulation_config(std::nullopt, {{"seed", "1.5"}}, kNoEnv), ConfigError);
  EXPECT_THROW(load_simulation_config(std::nullopt, {{"theta_deg", "1"}}, kNoEnv), ConfigError);
}
