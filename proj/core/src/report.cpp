#include "drillcoax/report.hpp"

#include <json.hpp>
#include <sstream>

#include "drillcoax/error.hpp"
#include "drillcoax/scan_io.hpp"

namespace drillcoax {
namespace {

using nlohmann::json;

json point(const Point2& p) { return json::array({p[0], p[1]}); }

json sections(const std::vector<CrossSection>& list) {
  json out = json::array();
  for (const auto& s : list) {
    out.push_back({{"x", s.x},
                   {"center", point(s.fit.center)},
                   {"radius", s.fit.radius},
                   {"residual", s.fit.residual},
                   {"distance", s.distance},
                   {"points", s.fit.points}});
  }
  return out;
}

json model(const GmmModel& m) {
  return {{"weights", m.weights}, {"means", m.means}, {"sigmas", m.sigmas}};
}

void write(const std::filesystem::path& path, const std::string& text) { write_text_file(path, text); }

}  // namespace

std::string report_json(const CoaxialityReport& r) {
  const auto& u = r.uncertainty;
  json j;
  j["coaxiality_mm"] = r.coaxiality;
  j["benchmark_center"] = point(r.benchmark);
  j["sections"] = sections(r.axis.sections);
  j["shank_sections"] = sections(r.axis.shank);
  j["xsm"] = r.axis.xsm;
  j["peak_x"] = r.axis.peak_x;
  j["located_x"] = r.axis.located_x;
  j["grid_step"] = r.axis.grid_step;
  j["theta_deg"] = r.theta_deg;
  j["delta_z_s"] = r.delta_z_s;
  j["axis_distance_D"] = r.axis_distance;
  j["epsilon"] = u.epsilon;
  j["uncertainty"] = {
      {"delta_z", u.delta_z},
      {"delta_c", u.delta_c},
      {"delta_eta", u.delta_eta},
      {"delta_D", u.delta_D},
      {"delta_z_p", u.delta_z_p},
      {"delta_R", u.delta_R},
      {"C_s", u.C_s},
      {"epsilon", u.epsilon},
      {"within_spec", r.within_spec},
      {"aspect_L_over_D_d", u.aspect},
      {"min_aspect_for_ratio", r.min_aspect_for_ratio},
      {"aspect_note",
       "a bound of the form R/L <= 10 is not implied by epsilon <= max_ratio; "
       "min_aspect_for_ratio is the L/D_d bound that is"},
  };
  j["segmentation"] = {
      {"input_points", r.input_points},
      {"filtered_points", r.filtered_points},
      {"blade_back_points", r.blade_back_points},
      {"sor_removed", r.sor_removed},
      {"grid", {r.grid.blocks_x, r.grid.blocks_y, r.grid.patches_x, r.grid.patches_y}},
      {"converged", r.segmentation_converged},
      {"iterations", r.segmentation_iterations},
  };
  j["warnings"] = r.warnings;
  j["runtime_s"] = r.runtime_s;
  return j.dump(2) + "\n";
}

std::string calibration_json(const CalibrationResult& c) {
  json j;
  j["D"] = c.D;
  j["i_star"] = c.best_frame;
  j["delta_z"] = c.delta_z;
  j["spacing_residual"] = c.spacing_residual;
  j["pass_rule_I"] = c.pass_rule_I;
  j["pass_rule_II"] = c.pass_rule_II;
  j["pass_rule_III"] = c.pass_rule_III;
  j["pass"] = c.pass();
  j["boundary_warning"] = c.boundary_warning;
  j["other_local_minima"] = c.other_local_minima;
  return j.dump(2) + "\n";
}

std::string model_json(const SegmentationResult& r) {
  json j = model(r.reference);
  j["iterations"] = r.iterations;
  j["loglik"] = r.log_likelihood;
  j["converged"] = r.converged;
  j["homogeneous_cloud"] = r.homogeneous_cloud;
  json blocks = json::array();
  for (std::size_t b = 0; b < r.blocks.size(); ++b) {
    const auto& f = r.blocks[b];
    json e = model(f.model);
    e["block"] = b;
    e["features"] = f.features;
    e["homogeneous"] = f.homogeneous;
    e["iterations"] = f.iterations;
    e["loglik"] = f.log_likelihood;
    e["converged"] = f.converged;
    blocks.push_back(std::move(e));
  }
  j["blocks"] = std::move(blocks);
  return j.dump(2) + "\n";
}

std::string truth_json(const GroundTruth& t) {
  json j;
  j["true_coaxiality"] = t.true_coaxiality;
  j["apex_x"] = t.apex_x;
  j["phi"] = t.phi_deg;
  j["benchmark_center"] = point(t.benchmark);
  return j.dump(2) + "\n";
}

void write_plot_csvs(const std::filesystem::path& dir, const CoaxialityReport& r) {
  const auto& a = r.axis;
  std::ostringstream dev;
  dev << "x,absv,absh,squabs\n";
  for (std::size_t i = 0; i < a.squabs.x.size(); ++i) {
    dev << format_double(a.squabs.x[i]) << ',' << format_double(a.absv.z[i]) << ',' << format_double(a.absh.z[i])
        << ',' << format_double(a.squabs.z[i]) << '\n';
  }
  write(dir / "deviation.csv", dev.str());

  std::ostringstream prof;
  prof << "slot,angle_deg,kind,x,z\n";
  for (const auto& p : a.profiles) {
    for (const auto& s : p.samples) {
      prof << p.slot << ',' << format_double(p.angle_deg) << ",sample," << format_double(s.x) << ','
           << format_double(s.z) << '\n';
    }
    for (const auto& s : p.knots) {
      prof << p.slot << ',' << format_double(p.angle_deg) << ",knot," << format_double(s.x) << ','
           << format_double(s.z) << '\n';
    }
  }
  write(dir / "profiles.csv", prof.str());

  std::ostringstream pts, fits;
  pts << "kind,x0,y,z\n";
  fits << "kind,x,center_y,center_z,radius,residual,distance,points\n";
  auto emit = [&](const char* kind, const std::vector<CrossSection>& list) {
    for (const auto& s : list) {
      for (const auto& p : s.points) {
        pts << kind << ',' << format_double(s.x) << ',' << format_double(p[0]) << ',' << format_double(p[1]) << '\n';
      }
      fits << kind << ',' << format_double(s.x) << ',' << format_double(s.fit.center[0]) << ','
           << format_double(s.fit.center[1]) << ',' << format_double(s.fit.radius) << ','
           << format_double(s.fit.residual) << ',' << format_double(s.distance) << ',' << s.fit.points << '\n';
    }
  };
  emit("section", a.sections);
  emit("shank", a.shank);
  write(dir / "sections.csv", pts.str());
  write(dir / "section_fits.csv", fits.str());
}

}  // namespace drillcoax
