#pragma once

// Pipeline and simulation configuration.
//
// Values are layered: built-in defaults, then a key=value file, then
// environment variables named DRILLCOAX_<KEY> (key upper-cased), then
// explicit overrides from the command line. Every layer goes through the
// same key table, so unknown keys are rejected everywhere.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drillcoax/axis.hpp"
#include "drillcoax/calibration.hpp"
#include "drillcoax/segmentation.hpp"
#include "drillcoax/simulator.hpp"
#include "drillcoax/sor.hpp"

namespace drillcoax {

inline constexpr const char* kEnvPrefix = "DRILLCOAX_";       // pipeline keys
inline constexpr const char* kSimEnvPrefix = "DRILLCOAX_SIM_";  // simulation keys

struct PipelineConfig {
  double axis_distance = 0.0;      // D; 0 uses the scan metadata
  std::string calibration_scan;    // optional block scan; solved D overrides axis_distance
  double gamma = 0.0;              // 0 uses the scan metadata
  double z_near = 106.5;           // straight-through depth filter
  double z_far = 200.0;

  // Segmentation. Zero grid counts are derived from GridSizing.
  GridShape grid{0, 0, 0, 0};
  GridSizing sizing;
  double bin_width = 0.039;
  double em_tolerance = 1e-8;
  int em_max_iterations = 200;
  double sigma_floor = 0.0;        // 0: bin_width / sqrt(12)
  double min_separation = 0.1;
  double min_bimodality = 3.0;
  bool sor_enabled = true;
  SorOptions sor;

  // Axis reconstruction.
  double theta_deg = 0.0;
  int profile_window = 2;
  double profile_bin = 1.0;
  double profile_outlier_window = 5.0;
  double profile_outlier_tolerance = 0.1;
  double delta_z_s = 0.01;
  double grid_step = 0.0;
  double shank_min = 5.0;
  double shank_max = 35.0;
  int shank_sections = 5;

  // Uncertainty inputs.
  double delta_z = 0.003;
  double delta_c = 0.005;
  double nominal_radius = 5.0;
  double part_length = 100.0;
  double part_diameter = 10.0;
  double max_ratio = 0.20;

  CalibrationOptions calibration;

  SegmentationOptions segmentation_options() const;
  AxisOptions axis_options() const;

  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

struct SimulationConfig {
  DrillSpec drill;
  OcclusionModel occlusion;
  ScanOptions scan;
  ScanMeta meta{1000, 1350, 150.0, 0.0};
  bool calibration_block = false;
  CalibrationBlockSpec block;
  CalibrationScanOptions block_scan;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// Applies one key. Throws ConfigError for unknown keys or bad values;
/// `source` is used in messages.
void set_option(PipelineConfig& config, const std::string& key, const std::string& value,
                const std::string& source = "override");
void set_option(SimulationConfig& config, const std::string& key, const std::string& value,
                const std::string& source = "override");

std::vector<std::string> option_keys(const PipelineConfig&);
std::vector<std::string> option_keys(const SimulationConfig&);

/// defaults < file < environment < overrides, then validate().
PipelineConfig load_pipeline_config(const std::optional<std::filesystem::path>& file,
                                    const std::map<std::string, std::string>& overrides = {},
                                    const EnvLookup& env = process_env);
SimulationConfig load_simulation_config(const std::optional<std::filesystem::path>& file,
                                        const std::map<std::string, std::string>& overrides = {},
                                        const EnvLookup& env = process_env);

}  // namespace drillcoax
