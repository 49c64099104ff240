#pragma once

// Statistical outlier removal over 3-D points.
//
// For each point the mean distance to its k nearest neighbours is computed;
// points whose statistic exceeds mean + std_multiplier * std (taken over the
// whole cloud) are removed.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace drillcoax {

using Point3 = std::array<double, 3>;

/// Static k-d tree for k-nearest-neighbour queries.
class KdTree {
 public:
  explicit KdTree(std::span<const Point3> points);

  std::size_t size() const { return entries_.size(); }

  /// Squared distances of the k nearest stored points to `query`, ascending.
  /// `skip` (a stored point index) is excluded from the result, which is how
  /// a point queries its own neighbourhood.
  void knn(const Point3& query, std::size_t k, std::vector<double>& dist2,
           std::uint32_t skip = UINT32_MAX) const;

 private:
  struct Node {
    std::uint32_t begin, end;     // range in entries_
    std::uint32_t left, right;    // children, 0 for leaves
    int axis;
    double split;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);

  struct Entry {
    Point3 p;
    std::uint32_t index;  // position in the input span
  };

  std::vector<Entry> entries_;  // points in tree order
  std::vector<Node> nodes_;
};

struct SorOptions {
  int k = 8;
  double std_multiplier = 3.0;
};

struct SorResult {
  std::vector<std::uint8_t> keep;       // one flag per input point
  std::vector<double> mean_distance;    // empty when skipped
  double mean = 0.0;
  double stddev = 0.0;
  double threshold = 0.0;
  std::size_t removed = 0;
  bool skipped = false;
  std::string warning;
};

/// Mean distance of every point to its k nearest other points.
std::vector<double> mean_knn_distances(std::span<const Point3> points, int k);

/// Throws ConfigError when k < 1 or std_multiplier < 0. With no more than k
/// points the filter is skipped: everything is kept and `warning` is set.
SorResult sor_filter(std::span<const Point3> points, const SorOptions& options);

}  // namespace drillcoax
