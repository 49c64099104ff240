#pragma once

// Scan data types, the sensor -> measurement and sensor -> unrolled
// coordinate transforms, and axis-aligned range filtering.
//
// Conventions: lengths in millimetres, angles in radians unless a name says
// otherwise. The turntable axis is the measurement x axis. A sensor depth z is
// the distance from the sensor along the laser plane, so D - z is the radial
// distance from the turntable axis.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace drillcoax {

struct SensorPoint {
  double x = 0.0;
  double z = 0.0;
};

/// One triggered profile. Points are sorted by ascending x; dropouts are
/// simply absent, so frames may be ragged.
struct SensorFrame {
  int index = 0;
  std::vector<SensorPoint> points;
};

struct ScanMeta {
  int frame_count = 0;        // I
  int points_per_frame = 0;   // J (nominal; frames may hold fewer)
  double axis_distance = 0.0; // D, sensor to turntable axis
  double gamma = 1.0;         // unroll coefficient

  /// Throws ConfigError unless I >= 4, J >= 0, D > 0 and gamma > 0.
  void validate() const;
};

struct ScanSet {
  ScanMeta meta;
  std::vector<SensorFrame> frames;

  std::size_t point_count() const;
};

enum class Label : std::uint8_t { unlabeled = 0, blade_back, background, outlier };

const char* to_string(Label label);
/// Parses the names produced by to_string; throws ConfigError otherwise.
Label label_from_string(std::string_view name);

struct CloudPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  int frame = 0;
  Label label = Label::unlabeled;
};

struct MeasurementCloud {
  std::vector<CloudPoint> points;
};

struct UnrolledPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  int frame = 0;
};

struct UnrolledCloud {
  std::vector<UnrolledPoint> points;
};

enum class Axis { x, y, z };

/// Turntable angle of frame `index` in radians, 2*pi*index/frame_count. The
/// ratio is formed first so large I does not accumulate drift.
double frame_angle(int index, int frame_count);

/// Maps a frame into the measurement frame:
///   x' = x, y' = (D - z) sin(theta_i), z' = (D - z) cos(theta_i).
/// Throws ConfigError when I <= 0 or D <= 0.
std::vector<CloudPoint> to_measurement_frame(const SensorFrame& frame, const ScanMeta& meta);

/// Transforms every frame of a scan; point order follows frame order.
MeasurementCloud to_measurement_cloud(const ScanSet& scan);

/// Unrolls a scan: x'' = x, y'' = 2*pi*gamma*i/I, z'' = z.
UnrolledCloud unroll(std::span<const SensorFrame> frames, const ScanMeta& meta);
inline UnrolledCloud unroll(const ScanSet& scan) { return unroll(scan.frames, scan.meta); }

/// Keeps points whose coordinate along `axis` lies in [min, max]; order is
/// preserved. Throws ConfigError when min >= max.
UnrolledCloud passthrough_filter(const UnrolledCloud& cloud, Axis axis, double min, double max);
MeasurementCloud passthrough_filter(const MeasurementCloud& cloud, Axis axis, double min, double max);

/// Drops sensor samples whose depth is outside [z_near, z_far].
ScanSet depth_range_filter(const ScanSet& scan, double z_near, double z_far);

}  // namespace drillcoax
