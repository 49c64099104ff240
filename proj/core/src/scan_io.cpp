#include "drillcoax/scan_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "io";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool to_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool to_int(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Splits `line` on commas into exactly N fields.
template <std::size_t N>
bool split_fields(std::string_view line, std::array<std::string_view, N>& fields) {
  std::size_t start = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const auto comma = line.find(',', start);
    if (i + 1 < N) {
      if (comma == std::string_view::npos) return false;
      fields[i] = line.substr(start, comma - start);
      start = comma + 1;
    } else {
      if (comma != std::string_view::npos) return false;
      fields[i] = line.substr(start);
    }
  }
  return true;
}

// Iterates over lines, handing each (line_number, text) to `fn`.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    fn(line_no, text.substr(pos, end - pos));
    pos = end + 1;
  }
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw ParseError(kModule, source + ":" + std::to_string(line) + ": " + msg, line);
}

void expect_header(std::string_view actual, std::string_view expected, const std::string& source) {
  if (trim(actual) != expected) {
    parse_fail(source, 1, "expected header '" + std::string(expected) + "'");
  }
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text, const std::string& what) {
  double v = 0.0;
  if (!to_double(text, v)) {
    throw ConfigError(kModule, "invalid number for " + what + ": '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view text, const std::string& what) {
  int v = 0;
  if (!to_int(text, v)) {
    throw ConfigError(kModule, "invalid integer for " + what + ": '" + std::string(text) + "'");
  }
  return v;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(kModule, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(kModule, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(kModule, "write failed for '" + path.string() + "'");
}

std::vector<KeyValueEntry> parse_key_values(std::string_view text, const std::string& source) {
  std::vector<KeyValueEntry> entries;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(source, line_no, "expected key=value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) parse_fail(source, line_no, "empty key");
    entries.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  });
  return entries;
}

std::vector<KeyValueEntry> read_key_value_file(const std::filesystem::path& path) {
  return parse_key_values(read_text_file(path), path.string());
}

void write_key_value_file(const std::filesystem::path& path,
                          const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string text;
  for (const auto& [k, v] : entries) text += k + "=" + v + "\n";
  write_text_file(path, text);
}

ScanMeta read_scan_meta(const std::filesystem::path& path) {
  const auto source = path.string();
  ScanMeta meta;
  bool seen_i = false, seen_d = false;
  for (const auto& e : read_key_value_file(path)) {
    if (e.key == "frame_count") {
      if (!to_int(e.value, meta.frame_count)) parse_fail(source, e.line, "frame_count must be an integer");
      seen_i = true;
    } else if (e.key == "points_per_frame") {
      if (!to_int(e.value, meta.points_per_frame)) parse_fail(source, e.line, "points_per_frame must be an integer");
    } else if (e.key == "axis_distance_D") {
      if (!to_double(e.value, meta.axis_distance)) parse_fail(source, e.line, "axis_distance_D must be a number");
      seen_d = true;
    } else if (e.key == "gamma") {
      if (!to_double(e.value, meta.gamma)) parse_fail(source, e.line, "gamma must be a number");
    } else {
      parse_fail(source, e.line, "unknown key '" + e.key + "'");
    }
  }
  if (!seen_i) parse_fail(source, 0, "missing frame_count");
  if (!seen_d) parse_fail(source, 0, "missing axis_distance_D");
  return meta;
}

void write_scan_meta(const std::filesystem::path& path, const ScanMeta& meta) {
  write_key_value_file(path, {{"frame_count", std::to_string(meta.frame_count)},
                              {"points_per_frame", std::to_string(meta.points_per_frame)},
                              {"axis_distance_D", format_double(meta.axis_distance)},
                              {"gamma", format_double(meta.gamma)}});
}

std::vector<SensorFrame> parse_scan_csv(std::string_view text, const std::string& source) {
  std::vector<SensorFrame> frames;
  bool header = true;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (header) {
      expect_header(line, "frame,x,z", source);
      header = false;
      return;
    }
    if (trim(line).empty()) return;
    std::array<std::string_view, 3> f;
    if (!split_fields(line, f)) parse_fail(source, line_no, "expected 3 fields");
    int frame = 0;
    SensorPoint p;
    if (!to_int(f[0], frame) || frame < 0) parse_fail(source, line_no, "invalid frame index");
    if (!to_double(f[1], p.x)) parse_fail(source, line_no, "invalid x");
    if (!to_double(f[2], p.z)) parse_fail(source, line_no, "invalid z");
    if (frames.empty() || frames.back().index != frame) {
      if (!frames.empty() && frame < frames.back().index) {
        parse_fail(source, line_no, "frames must be contiguous and ascending");
      }
      frames.push_back({frame, {}});
    }
    frames.back().points.push_back(p);
  });
  if (header) parse_fail(source, 1, "empty file");
  for (auto& f : frames) {
    std::stable_sort(f.points.begin(), f.points.end(),
                     [](const SensorPoint& a, const SensorPoint& b) { return a.x < b.x; });
  }
  return frames;
}

std::vector<SensorFrame> read_scan_csv(const std::filesystem::path& path) {
  return parse_scan_csv(read_text_file(path), path.string());
}

std::string format_scan_csv(const std::vector<SensorFrame>& frames) {
  std::string out = "frame,x,z\n";
  std::size_t n = 0;
  for (const auto& f : frames) n += f.points.size();
  out.reserve(out.size() + n * 32);
  for (const auto& f : frames) {
    const auto idx = std::to_string(f.index);
    for (const auto& p : f.points) {
      out += idx;
      out += ',';
      out += format_double(p.x);
      out += ',';
      out += format_double(p.z);
      out += '\n';
    }
  }
  return out;
}

void write_scan_csv(const std::filesystem::path& path, const std::vector<SensorFrame>& frames) {
  write_text_file(path, format_scan_csv(frames));
}

ScanSet read_scan(const std::filesystem::path& csv, const std::filesystem::path& meta) {
  ScanSet scan;
  scan.meta = read_scan_meta(meta);
  scan.meta.validate();
  scan.frames = read_scan_csv(csv);
  for (const auto& f : scan.frames) {
    if (f.index >= scan.meta.frame_count) {
      throw ParseError(kModule,
                       csv.string() + ": frame " + std::to_string(f.index) + " >= frame_count " +
                           std::to_string(scan.meta.frame_count),
                       0);
    }
  }
  return scan;
}

std::vector<LabeledSample> read_labeled_csv(const std::filesystem::path& path) {
  const auto source = path.string();
  const auto text = read_text_file(path);
  std::vector<LabeledSample> out;
  bool header = true;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (header) {
      expect_header(line, "frame,x,z,label", source);
      header = false;
      return;
    }
    if (trim(line).empty()) return;
    std::array<std::string_view, 4> f;
    if (!split_fields(line, f)) parse_fail(source, line_no, "expected 4 fields");
    LabeledSample s;
    if (!to_int(f[0], s.frame)) parse_fail(source, line_no, "invalid frame index");
    if (!to_double(f[1], s.x)) parse_fail(source, line_no, "invalid x");
    if (!to_double(f[2], s.z)) parse_fail(source, line_no, "invalid z");
    try {
      s.label = label_from_string(trim(f[3]));
    } catch (const ConfigError&) {
      parse_fail(source, line_no, "invalid label");
    }
    out.push_back(s);
  });
  if (header) parse_fail(source, 1, "empty file");
  return out;
}

void write_labeled_csv(const std::filesystem::path& path, const std::vector<LabeledSample>& samples) {
  std::string out = "frame,x,z,label\n";
  out.reserve(out.size() + samples.size() * 40);
  for (const auto& s : samples) {
    out += std::to_string(s.frame);
    out += ',';
    out += format_double(s.x);
    out += ',';
    out += format_double(s.z);
    out += ',';
    out += to_string(s.label);
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace drillcoax
