#include "drillcoax/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "drillcoax/error.hpp"
#include "drillcoax/scan_io.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "cli-report";

template <typename T>
using Setter = std::function<void(T&, const std::string&, const std::string&)>;

template <typename T, typename F>
Setter<T> real(F field) {
  return [field](T& c, const std::string& v, const std::string& what) { field(c) = parse_double(v, what); };
}

template <typename T, typename F>
Setter<T> integer(F field) {
  return [field](T& c, const std::string& v, const std::string& what) { field(c) = parse_int(v, what); };
}

bool parse_bool(const std::string& v, const std::string& what) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError(kModule, "invalid boolean for " + what + ": '" + v + "'");
}

#define DC_REAL(T, name, expr) {name, real<T>([](T& c) -> double& { return expr; })}
#define DC_INT(T, name, expr) {name, integer<T>([](T& c) -> int& { return expr; })}

const std::map<std::string, Setter<PipelineConfig>>& pipeline_table() {
  using P = PipelineConfig;
  static const std::map<std::string, Setter<P>> table = {
      DC_REAL(P, "axis_distance_D", c.axis_distance),
      {"calibration_scan", [](P& c, const std::string& v, const std::string&) { c.calibration_scan = v; }},
      DC_REAL(P, "gamma", c.gamma),
      DC_REAL(P, "z_near", c.z_near),
      DC_REAL(P, "z_far", c.z_far),
      DC_INT(P, "blocks_x", c.grid.blocks_x),
      DC_INT(P, "blocks_y", c.grid.blocks_y),
      DC_INT(P, "patches_x", c.grid.patches_x),
      DC_INT(P, "patches_y", c.grid.patches_y),
      DC_INT(P, "flute_count", c.sizing.flute_count),
      DC_REAL(P, "block_length", c.sizing.block_length),
      DC_REAL(P, "patch_frames", c.sizing.patch_frames),
      DC_REAL(P, "patch_samples", c.sizing.patch_samples),
      DC_REAL(P, "bin_width", c.bin_width),
      DC_REAL(P, "em_tolerance", c.em_tolerance),
      DC_INT(P, "em_max_iterations", c.em_max_iterations),
      DC_REAL(P, "sigma_floor", c.sigma_floor),
      DC_REAL(P, "min_separation", c.min_separation),
      DC_REAL(P, "min_bimodality", c.min_bimodality),
      {"sor_enabled", [](P& c, const std::string& v, const std::string& w) { c.sor_enabled = parse_bool(v, w); }},
      DC_INT(P, "sor_k", c.sor.k),
      DC_REAL(P, "sor_std_multiplier", c.sor.std_multiplier),
      DC_REAL(P, "theta_deg", c.theta_deg),
      DC_INT(P, "profile_window", c.profile_window),
      DC_REAL(P, "profile_bin", c.profile_bin),
      DC_REAL(P, "profile_outlier_window", c.profile_outlier_window),
      DC_REAL(P, "profile_outlier_tolerance", c.profile_outlier_tolerance),
      DC_REAL(P, "delta_z_s", c.delta_z_s),
      DC_REAL(P, "grid_step", c.grid_step),
      DC_REAL(P, "shank_min", c.shank_min),
      DC_REAL(P, "shank_max", c.shank_max),
      DC_INT(P, "shank_sections", c.shank_sections),
      DC_REAL(P, "delta_z", c.delta_z),
      DC_REAL(P, "delta_c", c.delta_c),
      DC_REAL(P, "nominal_radius", c.nominal_radius),
      DC_REAL(P, "part_length", c.part_length),
      DC_REAL(P, "part_diameter", c.part_diameter),
      DC_REAL(P, "max_ratio", c.max_ratio),
      DC_REAL(P, "delta_z_threshold", c.calibration.delta_z_threshold),
      DC_REAL(P, "spacing_tolerance", c.calibration.spacing_tolerance),
      DC_REAL(P, "jump_threshold", c.calibration.jump_threshold),
      DC_REAL(P, "sensor_x_min", c.calibration.x_min),
      DC_REAL(P, "sensor_x_max", c.calibration.x_max),
  };
  return table;
}

const std::map<std::string, Setter<SimulationConfig>>& simulation_table() {
  using S = SimulationConfig;
  static const std::map<std::string, Setter<S>> table = {
      DC_REAL(S, "shank_length", c.drill.shank_length),
      DC_REAL(S, "shank_diameter", c.drill.shank_diameter),
      DC_REAL(S, "working_length", c.drill.working_length),
      DC_REAL(S, "working_diameter", c.drill.working_diameter),
      DC_INT(S, "flute_count", c.drill.flute_count),
      DC_REAL(S, "helix_pitch", c.drill.helix_pitch),
      DC_REAL(S, "blade_back_deg", c.drill.blade_back_deg),
      DC_REAL(S, "blade_lip_deg", c.drill.blade_lip_deg),
      DC_REAL(S, "lip_ramp_deg", c.drill.lip_ramp_deg),
      DC_REAL(S, "lip_height", c.drill.lip_height),
      DC_REAL(S, "groove_depth", c.drill.groove_depth),
      DC_REAL(S, "groove_flat_deg", c.drill.groove_flat_deg),
      DC_REAL(S, "bend_amplitude", c.drill.bend.amplitude),
      DC_REAL(S, "apex_x", c.drill.bend.apex_x),
      DC_REAL(S, "phi_deg", c.drill.bend.phi_deg),
      DC_REAL(S, "incidence_limit_deg", c.occlusion.incidence_limit_deg),
      DC_REAL(S, "dof_near", c.occlusion.dof_near),
      DC_REAL(S, "dof_far", c.occlusion.dof_far),
      DC_REAL(S, "fov_near", c.occlusion.fov_near),
      DC_REAL(S, "fov_far", c.occlusion.fov_far),
      DC_REAL(S, "fov_center_x", c.occlusion.fov_center_x),
      DC_REAL(S, "x_min", c.scan.x_min),
      DC_REAL(S, "x_max", c.scan.x_max),
      DC_REAL(S, "noise_sigma", c.scan.noise_sigma),
      {"seed", [](S& c, const std::string& v, const std::string& w) {
         const double s = parse_double(v, w);
         if (!(s >= 0.0) || s != std::floor(s) || s > 1.8e19) throw ConfigError(kModule, w + " must be a non-negative integer");
         c.scan.seed = static_cast<std::uint64_t>(s);
         c.block_scan.seed = c.scan.seed;
       }},
      DC_REAL(S, "outlier_fraction", c.scan.outlier_fraction),
      DC_REAL(S, "outlier_min", c.scan.outlier_min),
      DC_REAL(S, "outlier_max", c.scan.outlier_max),
      DC_INT(S, "frame_count", c.meta.frame_count),
      DC_INT(S, "points_per_frame", c.meta.points_per_frame),
      DC_REAL(S, "axis_distance_D", c.meta.axis_distance),
      DC_REAL(S, "gamma", c.meta.gamma),
      {"calibration_block", [](S& c, const std::string& v, const std::string& w) { c.calibration_block = parse_bool(v, w); }},
      DC_REAL(S, "block_l_a", c.block.l_a),
      DC_REAL(S, "block_l_b", c.block.l_b),
      DC_REAL(S, "block_l_c", c.block.l_c),
      DC_REAL(S, "block_l_d", c.block.l_d),
      DC_REAL(S, "block_d_a", c.block.d_a),
      DC_REAL(S, "block_d_b", c.block.d_b),
      DC_REAL(S, "block_roll_slope", c.block.roll_slope),
      DC_INT(S, "block_frames", c.block_scan.frames),
      DC_INT(S, "block_best_frame", c.block_scan.best_frame),
      DC_REAL(S, "block_lateral_step", c.block_scan.lateral_step),
  };
  return table;
}

#undef DC_REAL
#undef DC_INT

template <typename T>
void apply(const std::map<std::string, Setter<T>>& table, T& config, const std::string& key, const std::string& value,
           const std::string& source) {
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(kModule, source + ": unknown configuration key '" + key + "'");
  it->second(config, value, source + ": " + key);
}

template <typename T>
void layer(const std::map<std::string, Setter<T>>& table, T& config, const std::optional<std::filesystem::path>& file,
           const std::map<std::string, std::string>& overrides, const EnvLookup& env, const std::string& prefix) {
  if (file) {
    for (const auto& e : read_key_value_file(*file)) {
      apply(table, config, e.key, e.value, file->string() + ":" + std::to_string(e.line));
    }
  }
  if (env) {
    for (const auto& [key, setter] : table) {
      std::string name = prefix;
      for (char ch : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (const auto v = env(name)) apply(table, config, key, *v, "environment " + name);
    }
  }
  for (const auto& [key, value] : overrides) apply(table, config, key, value, "command line");
}

void check(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) throw ConfigError(kModule, "invalid configuration: " + key + " " + rule);
}

// Keeps the shared scan settings of the block scan in step with the drill scan.
void sync_block_scan(SimulationConfig& c) {
  c.block_scan.axis_distance = c.meta.axis_distance;
  c.block_scan.points_per_frame = c.meta.points_per_frame;
  c.block_scan.noise_sigma = c.scan.noise_sigma;
  c.block_scan.seed = c.scan.seed;
}

}  // namespace

SegmentationOptions PipelineConfig::segmentation_options() const {
  SegmentationOptions o;
  o.grid = grid;
  o.bin_width = bin_width;
  o.em.tolerance = em_tolerance;
  o.em.max_iterations = em_max_iterations;
  // Modes are bin centres, so a single surface still scatters them by about
  // bin_width / sqrt(12); a tighter floor lets one component lock onto one bin.
  o.em.sigma_floor = sigma_floor > 0.0 ? sigma_floor : bin_width / std::sqrt(12.0);
  o.min_separation = min_separation;
  o.min_bimodality = min_bimodality;
  return o;
}

AxisOptions PipelineConfig::axis_options() const {
  AxisOptions o;
  o.profile.theta_deg = theta_deg;
  o.profile.window_frames = profile_window;
  o.profile.bin_width = profile_bin;
  o.profile.outlier_window = profile_outlier_window;
  o.profile.outlier_tolerance = profile_outlier_tolerance;
  o.delta_z_s = delta_z_s;
  o.grid_step = grid_step;
  o.shank_min = shank_min;
  o.shank_max = shank_max;
  o.shank_sections = shank_sections;
  return o;
}

void PipelineConfig::validate() const {
  check(axis_distance >= 0.0, "axis_distance_D", "must be >= 0 (0 uses the scan metadata)");
  check(gamma >= 0.0, "gamma", "must be >= 0 (0 uses the scan metadata)");
  check(z_near < z_far, "z_near/z_far", "require z_near < z_far");
  check(grid.blocks_x >= 0 && grid.blocks_y >= 0 && grid.patches_x >= 0 && grid.patches_y >= 0, "blocks/patches",
        "must be >= 0 (0 derives the count)");
  check(sizing.flute_count >= 1, "flute_count", "must be >= 1");
  check(sizing.block_length > 0.0, "block_length", "must be positive");
  check(sizing.patch_frames > 0.0 && sizing.patch_samples > 0.0, "patch_frames/patch_samples", "must be positive");
  check(bin_width > 0.0, "bin_width", "must be positive");
  check(em_tolerance > 0.0, "em_tolerance", "must be positive");
  check(em_max_iterations >= 1, "em_max_iterations", "must be >= 1");
  check(sigma_floor >= 0.0, "sigma_floor", "must be >= 0");
  check(min_separation >= 0.0, "min_separation", "must be >= 0");
  check(min_bimodality >= 0.0, "min_bimodality", "must be >= 0");
  check(sor.k >= 1, "sor_k", "must be >= 1");
  check(sor.std_multiplier >= 0.0, "sor_std_multiplier", "must be >= 0");
  check(std::isfinite(theta_deg), "theta_deg", "must be finite");
  check(profile_window >= 0, "profile_window", "must be >= 0");
  check(profile_bin >= 0.0, "profile_bin", "must be >= 0");
  check(profile_outlier_window >= 0.0, "profile_outlier_window", "must be >= 0");
  check(profile_outlier_tolerance >= 0.0, "profile_outlier_tolerance", "must be >= 0");
  check(delta_z_s >= 0.0, "delta_z_s", "must be >= 0");
  check(grid_step >= 0.0, "grid_step", "must be >= 0");
  check(shank_min < shank_max, "shank_min/shank_max", "require shank_min < shank_max");
  check(shank_sections >= 1, "shank_sections", "must be >= 1");
  check(delta_z >= 0.0 && delta_c >= 0.0, "delta_z/delta_c", "must be >= 0");
  check(nominal_radius > 0.0 && part_length > 0.0 && part_diameter > 0.0, "nominal_radius/part_length/part_diameter",
        "must be positive");
  check(max_ratio > 0.0, "max_ratio", "must be positive");
  check(calibration.delta_z_threshold >= 0.0, "delta_z_threshold", "must be >= 0");
  check(calibration.spacing_tolerance >= 0.0, "spacing_tolerance", "must be >= 0");
  check(calibration.jump_threshold > 0.0, "jump_threshold", "must be positive");
  check(calibration.x_min < calibration.x_max, "sensor_x_min/sensor_x_max", "require min < max");
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

void set_option(PipelineConfig& config, const std::string& key, const std::string& value, const std::string& source) {
  apply(pipeline_table(), config, key, value, source);
}

void set_option(SimulationConfig& config, const std::string& key, const std::string& value,
                const std::string& source) {
  apply(simulation_table(), config, key, value, source);
  sync_block_scan(config);
}

std::vector<std::string> option_keys(const PipelineConfig&) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : pipeline_table()) keys.push_back(k);
  return keys;
}

std::vector<std::string> option_keys(const SimulationConfig&) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : simulation_table()) keys.push_back(k);
  return keys;
}

PipelineConfig load_pipeline_config(const std::optional<std::filesystem::path>& file,
                                    const std::map<std::string, std::string>& overrides, const EnvLookup& env) {
  PipelineConfig c;
  layer(pipeline_table(), c, file, overrides, env, kEnvPrefix);
  c.validate();
  return c;
}

SimulationConfig load_simulation_config(const std::optional<std::filesystem::path>& file,
                                        const std::map<std::string, std::string>& overrides, const EnvLookup& env) {
  SimulationConfig c;
  c.block_scan.x_max = 125.0;
  sync_block_scan(c);
  layer(simulation_table(), c, file, overrides, env, kSimEnvPrefix);
  sync_block_scan(c);
  c.drill.validate();
  c.occlusion.validate();
  return c;
}

}  // namespace drillcoax
