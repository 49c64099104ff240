#include "drillcoax/scan_model.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "scan-model";

void check_transform_meta(const ScanMeta& meta) {
  if (meta.frame_count <= 0) {
    throw ConfigError(kModule, "frame_count must be positive, got " + std::to_string(meta.frame_count));
  }
  if (!(meta.axis_distance > 0.0)) {
    throw ConfigError(kModule, "axis_distance_D must be positive, got " + std::to_string(meta.axis_distance));
  }
}

void check_bounds(double min, double max) {
  if (!(min < max)) {
    throw ConfigError(kModule, "passthrough bounds require min < max, got [" + std::to_string(min) + ", " +
                                   std::to_string(max) + "]");
  }
}

template <typename P>
double coordinate(const P& p, Axis axis) {
  switch (axis) {
    case Axis::x: return p.x;
    case Axis::y: return p.y;
    case Axis::z: return p.z;
  }
  return p.z;
}

template <typename Cloud>
Cloud filter_cloud(const Cloud& cloud, Axis axis, double min, double max) {
  check_bounds(min, max);
  Cloud out;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    const double c = coordinate(p, axis);
    if (c >= min && c <= max) out.points.push_back(p);
  }
  return out;
}

}  // namespace

void ScanMeta::validate() const {
  if (frame_count < 4) {
    throw ConfigError(kModule, "frame_count must be >= 4, got " + std::to_string(frame_count));
  }
  if (points_per_frame < 0) {
    throw ConfigError(kModule, "points_per_frame must be >= 0");
  }
  if (!(axis_distance > 0.0)) {
    throw ConfigError(kModule, "axis_distance_D must be positive");
  }
  if (!(gamma > 0.0)) {
    throw ConfigError(kModule, "gamma must be positive");
  }
}

std::size_t ScanSet::point_count() const {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.points.size();
  return n;
}

const char* to_string(Label label) {
  switch (label) {
    case Label::unlabeled: return "unlabeled";
    case Label::blade_back: return "blade_back";
    case Label::background: return "background";
    case Label::outlier: return "outlier";
  }
  return "unlabeled";
}

Label label_from_string(std::string_view name) {
  if (name == "blade_back") return Label::blade_back;
  if (name == "background") return Label::background;
  if (name == "outlier") return Label::outlier;
  if (name == "unlabeled") return Label::unlabeled;
  throw ConfigError(kModule, "unknown label '" + std::string(name) + "'");
}

double frame_angle(int index, int frame_count) {
  const double fraction = static_cast<double>(index) / static_cast<double>(frame_count);
  return 2.0 * std::numbers::pi * fraction;
}

std::vector<CloudPoint> to_measurement_frame(const SensorFrame& frame, const ScanMeta& meta) {
  check_transform_meta(meta);
  const double theta = frame_angle(frame.index, meta.frame_count);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  std::vector<CloudPoint> out;
  out.reserve(frame.points.size());
  for (const auto& p : frame.points) {
    const double radial = meta.axis_distance - p.z;
    out.push_back({p.x, radial * s, radial * c, frame.index, Label::unlabeled});
  }
  return out;
}

MeasurementCloud to_measurement_cloud(const ScanSet& scan) {
  MeasurementCloud cloud;
  cloud.points.reserve(scan.point_count());
  for (const auto& frame : scan.frames) {
    auto pts = to_measurement_frame(frame, scan.meta);
    cloud.points.insert(cloud.points.end(), pts.begin(), pts.end());
  }
  return cloud;
}

UnrolledCloud unroll(std::span<const SensorFrame> frames, const ScanMeta& meta) {
  if (meta.frame_count <= 0) {
    throw ConfigError(kModule, "frame_count must be positive");
  }
  if (!(meta.gamma > 0.0)) {
    throw ConfigError(kModule, "gamma must be positive");
  }
  std::size_t n = 0;
  for (const auto& f : frames) n += f.points.size();
  UnrolledCloud cloud;
  cloud.points.reserve(n);
  for (const auto& frame : frames) {
    const double y = meta.gamma * frame_angle(frame.index, meta.frame_count);
    for (const auto& p : frame.points) cloud.points.push_back({p.x, y, p.z, frame.index});
  }
  return cloud;
}

UnrolledCloud passthrough_filter(const UnrolledCloud& cloud, Axis axis, double min, double max) {
  return filter_cloud(cloud, axis, min, max);
}

MeasurementCloud passthrough_filter(const MeasurementCloud& cloud, Axis axis, double min, double max) {
  return filter_cloud(cloud, axis, min, max);
}

ScanSet depth_range_filter(const ScanSet& scan, double z_near, double z_far) {
  check_bounds(z_near, z_far);
  ScanSet out;
  out.meta = scan.meta;
  out.frames.reserve(scan.frames.size());
  for (const auto& frame : scan.frames) {
    SensorFrame f{frame.index, {}};
    f.points.reserve(frame.points.size());
    for (const auto& p : frame.points) {
      if (p.z >= z_near && p.z <= z_far) f.points.push_back(p);
    }
    out.frames.push_back(std::move(f));
  }
  return out;
}

}  // namespace drillcoax
