#include "drillcoax/sor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "drillcoax/error.hpp"

namespace drillcoax {
namespace {

constexpr const char* kModule = "segmentation";
constexpr std::uint32_t kLeafSize = 12;

// Bounded max-heap of the best k squared distances.
class Neighbours {
 public:
  Neighbours(std::size_t k, std::vector<double>& store) : k_(k), d_(store) { d_.clear(); }

  double worst() const { return d_.size() < k_ ? std::numeric_limits<double>::infinity() : d_.front(); }

  void offer(double d2) {
    if (d_.size() < k_) {
      d_.push_back(d2);
      std::push_heap(d_.begin(), d_.end());
    } else if (d2 < d_.front()) {
      std::pop_heap(d_.begin(), d_.end());
      d_.back() = d2;
      std::push_heap(d_.begin(), d_.end());
    }
  }

 private:
  std::size_t k_;
  std::vector<double>& d_;
};

}  // namespace

KdTree::KdTree(std::span<const Point3> points) {
  if (points.size() >= UINT32_MAX) throw ConfigError(kModule, "too many points for the k-d tree");
  entries_.resize(points.size());
  for (std::uint32_t i = 0; i < entries_.size(); ++i) entries_[i] = {points[i], i};
  nodes_.reserve(2 * points.size() / kLeafSize + 2);
  if (!points.empty()) build(0, static_cast<std::uint32_t>(points.size()));
}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, 0, 0, 0, 0.0});
  if (end - begin <= kLeafSize) return id;

  Point3 lo = entries_[begin].p, hi = entries_[begin].p;
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], entries_[i].p[a]);
      hi[a] = std::max(hi[a], entries_[i].p[a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  if (!(hi[axis] > lo[axis])) return id;  // all coincident: keep as a leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(entries_.begin() + begin, entries_.begin() + mid, entries_.begin() + end,
                   [axis](const Entry& a, const Entry& b) { return a.p[axis] < b.p[axis]; });
  const double split = entries_[mid].p[axis];
  const std::uint32_t left = build(begin, mid);
  const std::uint32_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::knn(const Point3& q, std::size_t k, std::vector<double>& dist2, std::uint32_t skip) const {
  Neighbours best(k, dist2);
  if (nodes_.empty() || k == 0) return;

  struct Pending {
    std::uint32_t node;
    double bound;
  };
  Pending stack[128];
  int top = 0;
  stack[top++] = {0, 0.0};
  while (top > 0) {
    const Pending p = stack[--top];
    if (p.bound >= best.worst()) continue;
    const Node& n = nodes_[p.node];
    if (n.left == 0) {
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        const Entry& e = entries_[i];
        if (e.index == skip) continue;
        const double dx = e.p[0] - q[0];
        const double dy = e.p[1] - q[1];
        const double dz = e.p[2] - q[2];
        best.offer(dx * dx + dy * dy + dz * dz);
      }
      continue;
    }
    const double diff = q[n.axis] - n.split;
    const std::uint32_t near = diff < 0.0 ? n.left : n.right;
    const std::uint32_t far = diff < 0.0 ? n.right : n.left;
    stack[top++] = {far, std::max(p.bound, diff * diff)};
    stack[top++] = {near, p.bound};
  }
  std::sort_heap(dist2.begin(), dist2.end());
}

std::vector<double> mean_knn_distances(std::span<const Point3> points, int k) {
  if (k < 1) throw ConfigError(kModule, "SOR needs k >= 1");
  const KdTree tree(points);
  std::vector<double> out(points.size());
  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < points.size(); ++i) {
    tree.knn(points[i], static_cast<std::size_t>(k), d2, static_cast<std::uint32_t>(i));
    double s = 0.0;
    for (double v : d2) s += std::sqrt(v);
    out[i] = d2.empty() ? 0.0 : s / static_cast<double>(d2.size());
  }
  return out;
}

SorResult sor_filter(std::span<const Point3> points, const SorOptions& options) {
  if (options.k < 1) throw ConfigError(kModule, "SOR needs k >= 1");
  if (!(options.std_multiplier >= 0.0)) throw ConfigError(kModule, "SOR std multiplier must be >= 0");

  SorResult r;
  r.keep.assign(points.size(), 1);
  if (points.size() <= static_cast<std::size_t>(options.k)) {
    r.skipped = true;
    r.warning = "SOR skipped: " + std::to_string(points.size()) + " points for k = " + std::to_string(options.k);
    return r;
  }

  r.mean_distance = mean_knn_distances(points, options.k);
  const double n = static_cast<double>(points.size());
  double sum = 0.0;
  for (double d : r.mean_distance) sum += d;
  r.mean = sum / n;
  double sq = 0.0;
  for (double d : r.mean_distance) sq += (d - r.mean) * (d - r.mean);
  r.stddev = std::sqrt(sq / (n - 1.0));
  r.threshold = r.mean + options.std_multiplier * r.stddev;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (r.mean_distance[i] > r.threshold) {
      r.keep[i] = 0;
      ++r.removed;
    }
  }
  return r;
}

}  // namespace drillcoax
