// drillcoax command-line front end.
//
// Exit codes: 0 success, 1 measurement-domain failure (including a failed
// calibration rule), 2 I/O, parse or configuration failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drillcoax/config.hpp"
#include "drillcoax/error.hpp"
#include "drillcoax/pipeline.hpp"
#include "drillcoax/report.hpp"
#include "drillcoax/scan_io.hpp"
#include "drillcoax/simulator.hpp"
#include "drillcoax/version.hpp"

namespace fs = std::filesystem;
using namespace drillcoax;

namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kIo = 2;

struct ScanArgs {
  std::string scan;
  std::string meta;
  std::string config;
  std::vector<std::string> sets;
};

fs::path sidecar(const std::string& scan, const std::string& meta) {
  if (!meta.empty()) return meta;
  fs::path p(scan);
  p.replace_extension(".meta");
  return p;
}

std::map<std::string, std::string> parse_sets(const std::vector<std::string>& sets) {
  std::map<std::string, std::string> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("cli-report", "--set expects key=value, got '" + s + "'");
    out[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return out;
}

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") std::cout << text;
  else write_text_file(out, text);
}

const char* hint(const std::string& module) {
  if (module == "calibration") return "check the block is fully in view and the sensor roll/pitch adjustment";
  if (module == "segmentation") return "check bin_width, grid counts and the depth filter range";
  if (module == "axis-reconstruction")
    return "try another theta_deg, a wider profile_window or a shank range that holds blade-back points";
  if (module == "simulator") return "check the drill geometry against the sensor field of view";
  if (module == "scan-model" || module == "cli-report") return "check the scan metadata and configuration values";
  return "see the message above";
}

void add_scan_options(CLI::App* cmd, ScanArgs& a) {
  cmd->add_option("--scan", a.scan, "scan CSV (frame,x,z)")->required();
  cmd->add_option("--meta", a.meta, "metadata sidecar (default: scan path with .meta)");
  cmd->add_option("--config", a.config, "key=value configuration file");
  cmd->add_option("--set", a.sets, "override one configuration key (key=value), repeatable");
}

PipelineConfig pipeline_config(const ScanArgs& a) {
  return load_pipeline_config(optional_path(a.config), parse_sets(a.sets));
}

int run_calibrate(const ScanArgs& a, const std::string& out) {
  const auto config = pipeline_config(a);
  const ScanSet scan = read_scan(a.scan, sidecar(a.scan, a.meta));
  const auto result = calibrate_scan(scan, config);
  emit(out, calibration_json(result));
  if (!result.pass()) {
    std::cerr << "drillcoax: calibration failed:"
              << (result.pass_rule_I ? "" : " rule I (block not fully in view)")
              << (result.pass_rule_II ? "" : " rule II (outline not straight, delta_z = " +
                                                 format_double(result.delta_z) + " mm)")
              << (result.pass_rule_III ? "" : " rule III (closest frame is not a strict minimum)") << '\n';
    return kDomain;
  }
  return kOk;
}

int run_measure(const ScanArgs& a, const std::string& out, const std::string& plots) {
  auto config = pipeline_config(a);
  if (!config.calibration_scan.empty()) {
    const ScanSet block = read_scan(config.calibration_scan, sidecar(config.calibration_scan, ""));
    const auto cal = calibrate_scan(block, config);
    if (!cal.pass()) {
      std::cerr << "drillcoax: calibration scan '" << config.calibration_scan << "' fails rules I-III\n";
      return kDomain;
    }
    config.axis_distance = cal.D;
  }
  const ScanSet scan = read_scan(a.scan, sidecar(a.scan, a.meta));
  const auto report = measure(scan, config);
  emit(out, report_json(report));
  if (!plots.empty()) write_plot_csvs(plots, report);
  for (const auto& w : report.warnings) std::cerr << "drillcoax: warning: " << w << '\n';
  return kOk;
}

int run_segment(const ScanArgs& a, const std::string& out, const std::string& model_out) {
  const auto config = pipeline_config(a);
  const ScanSet scan = read_scan(a.scan, sidecar(a.scan, a.meta));
  const auto seg = segment_scan(scan, config);
  std::vector<LabeledSample> samples;
  samples.reserve(seg.cloud.points.size());
  std::size_t k = 0;
  for (const auto& f : seg.frames) {
    for (const auto& p : f.points) samples.push_back({f.index, p.x, p.z, seg.cloud.points[k++].label});
  }
  write_labeled_csv(out, samples);
  if (!model_out.empty()) emit(model_out, model_json(seg.segmentation));
  if (seg.sor.skipped) std::cerr << "drillcoax: warning: " << seg.sor.warning << '\n';
  return kOk;
}

int run_simulate(const std::string& spec, const std::vector<std::string>& sets, const std::string& out_dir) {
  const auto config = load_simulation_config(optional_path(spec), parse_sets(sets));
  const fs::path dir(out_dir);
  if (config.calibration_block) {
    const auto sim = scan_calibration_block(config.block, config.block_scan);
    write_scan_csv(dir / "scan.csv", sim.scan.frames);
    write_scan_meta(dir / "scan.meta", sim.scan.meta);
    write_text_file(dir / "truth.json", "{\n  \"true_D\": " + format_double(sim.true_D) +
                                            ",\n  \"i_star\": " + std::to_string(sim.true_best_frame) + "\n}\n");
    return kOk;
  }
  const auto sim = scan_drill(config.drill, config.meta, config.occlusion, config.scan);
  write_scan_csv(dir / "scan.csv", sim.scan.frames);
  write_scan_meta(dir / "scan.meta", sim.scan.meta);
  std::vector<LabeledSample> truth;
  truth.reserve(sim.truth.labels.size());
  std::size_t k = 0;
  for (const auto& f : sim.scan.frames) {
    for (const auto& p : f.points) {
      const Label l = sim.truth.outlier[k] ? Label::outlier : sim.truth.labels[k];
      truth.push_back({f.index, p.x, p.z, l});
      ++k;
    }
  }
  write_labeled_csv(dir / "truth.csv", truth);
  write_text_file(dir / "truth.json", truth_json(sim.truth));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coaxiality measurement of twist drills from rotating line-laser scans"};
  app.set_version_flag("--version", std::string("drillcoax ") + kVersion);
  app.require_subcommand(1);

  ScanArgs cal_args, meas_args, seg_args;
  std::string cal_out, meas_out, plots, seg_out, model_out;
  auto* cal = app.add_subcommand("calibrate", "solve D from a calibration-block scan and check rules I-III");
  add_scan_options(cal, cal_args);
  cal->add_option("--out", cal_out, "result JSON (default: stdout)");

  auto* meas = app.add_subcommand("measure", "run the full coaxiality pipeline");
  add_scan_options(meas, meas_args);
  meas->add_option("--out", meas_out, "report JSON (default: stdout)");
  meas->add_option("--plots", plots, "directory for plot CSVs");

  auto* seg = app.add_subcommand("segment", "blade-back segmentation only");
  add_scan_options(seg, seg_args);
  seg->add_option("--out", seg_out, "labelled CSV (frame,x,z,label)")->required();
  seg->add_option("--model", model_out, "mixture model JSON");

  std::string spec, out_dir;
  std::vector<std::string> sim_sets;
  auto* sim = app.add_subcommand("simulate", "generate a synthetic drill or calibration-block scan");
  sim->add_option("--spec", spec, "key=value simulation spec");
  sim->add_option("--set", sim_sets, "override one simulation key (key=value), repeatable");
  sim->add_option("--out-dir", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIo;
  }

  try {
    if (*cal) return run_calibrate(cal_args, cal_out);
    if (*meas) return run_measure(meas_args, meas_out, plots);
    if (*seg) return run_segment(seg_args, seg_out, model_out);
    if (*sim) return run_simulate(spec, sim_sets, out_dir);
  } catch (const ParseError& e) {
    std::cerr << "drillcoax: parse error [" << e.module() << "]: " << e.what() << '\n';
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "drillcoax: I/O error [" << e.module() << "]: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "drillcoax: configuration error [" << e.module() << "]: " << e.what() << "\n  hint: "
              << hint(e.module()) << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "drillcoax: " << e.module() << " failed: " << e.what() << "\n  hint: " << hint(e.module()) << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "drillcoax: unexpected error: " << e.what() << '\n';
    return kDomain;
  }
  return kOk;
}
