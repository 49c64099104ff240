#pragma once

// File formats shared by the library and the command-line tool.
//
//   scan CSV       header `frame,x,z`; frames contiguous and ascending
//   labeled CSV    header `frame,x,z,label`
//   key=value      `#` comments, blank lines ignored, whitespace trimmed
//
// Parse failures throw ParseError with a 1-based line number.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "drillcoax/scan_model.hpp"

namespace drillcoax {

struct KeyValueEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

std::vector<KeyValueEntry> parse_key_values(std::string_view text, const std::string& source = "<text>");
std::vector<KeyValueEntry> read_key_value_file(const std::filesystem::path& path);
void write_key_value_file(const std::filesystem::path& path,
                          const std::vector<std::pair<std::string, std::string>>& entries);

/// Parses a metadata sidecar with keys frame_count, points_per_frame,
/// axis_distance_D and gamma. Unknown keys are a parse error.
ScanMeta read_scan_meta(const std::filesystem::path& path);
void write_scan_meta(const std::filesystem::path& path, const ScanMeta& meta);

/// Parses scan CSV text into frames. Only frames that carry samples appear in
/// the result; frame indices must be non-decreasing.
std::vector<SensorFrame> parse_scan_csv(std::string_view text, const std::string& source = "<text>");
std::vector<SensorFrame> read_scan_csv(const std::filesystem::path& path);
std::string format_scan_csv(const std::vector<SensorFrame>& frames);
void write_scan_csv(const std::filesystem::path& path, const std::vector<SensorFrame>& frames);

/// Reads a scan CSV plus its sidecar and validates the metadata.
ScanSet read_scan(const std::filesystem::path& csv, const std::filesystem::path& meta);

struct LabeledSample {
  int frame = 0;
  double x = 0.0;
  double z = 0.0;
  Label label = Label::unlabeled;
};

std::vector<LabeledSample> read_labeled_csv(const std::filesystem::path& path);
void write_labeled_csv(const std::filesystem::path& path, const std::vector<LabeledSample>& samples);

/// Shortest round-trip decimal representation.
std::string format_double(double value);
double parse_double(std::string_view text, const std::string& what);
int parse_int(std::string_view text, const std::string& what);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace drillcoax
