#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "luminav/mesh.hpp"
#include "luminav/types.hpp"

namespace luminav {

/// Bounding volume hierarchy over mesh faces. Purely an acceleration
/// structure: it enumerates candidate faces for a query and the caller's
/// exact predicate picks the winner, so results match a linear scan over
/// all faces bit for bit. Build is deterministic (median split on the
/// longest centroid axis, ties broken by face id).
class Bvh {
 public:
  explicit Bvh(const TriangleMesh& mesh);

  /// Calls fn(face_id) for every face whose (slightly padded) bounding box
  /// the ray touches at t >= 0. Superset of the faces the ray intersects.
  template <typename Fn>
  void for_each_ray_candidate(const Ray& ray, Fn&& fn) const {
    if (nodes_.empty()) return;
    Vec3 inv;
    for (int i = 0; i < 3; ++i) {
      inv[i] = ray.direction[i] != 0.0
                   ? 1.0 / ray.direction[i]
                   : std::numeric_limits<double>::infinity();
    }
    int stack[kMaxStack];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!slab_hit(node, ray.origin, ray.direction, inv)) continue;
      if (node.count > 0) {
        for (int i = 0; i < node.count; ++i) fn(order_[node.first + i]);
      } else {
        stack[top++] = node.left;
        stack[top++] = node.right;
      }
    }
  }

  /// Calls fn(face_id) for every face whose box could hold a point at
  /// squared distance <= best_d2 from p. fn is expected to shrink best_d2
  /// as it finds closer faces, which tightens the pruning as we go. Nodes
  /// at exactly best_d2 are still visited so equidistant ties resolve the
  /// same way as a full scan.
  template <typename Fn>
  void for_each_closest_candidate(const Vec3& p, double& best_d2, Fn&& fn) const {
    if (nodes_.empty()) return;
    int stack[kMaxStack];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (box_distance2(node, p) > best_d2) continue;
      if (node.count > 0) {
        for (int i = 0; i < node.count; ++i) fn(order_[node.first + i]);
      } else {
        // Descend into the nearer child first so best_d2 shrinks early.
        const double dl = box_distance2(nodes_[node.left], p);
        const double dr = box_distance2(nodes_[node.right], p);
        if (dl <= dr) {
          stack[top++] = node.right;
          stack[top++] = node.left;
        } else {
          stack[top++] = node.left;
          stack[top++] = node.right;
        }
      }
    }
  }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Vec3 lo;
    Vec3 hi;
    int left = -1;   // internal nodes: child indices
    int right = -1;
    int first = 0;   // leaves: range into order_
    int count = 0;
  };

  // Balanced median splits keep depth near log2(n/leaf); 96 covers any
  // mesh that fits in memory with a wide margin.
  static constexpr int kMaxStack = 96;

  static bool slab_hit(const Node& n, const Vec3& o, const Vec3& d,
                       const Vec3& inv) {
    double tmin = 0.0;
    double tmax = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
      if (d[i] == 0.0) {
        // Parallel to this slab: inside it or a clean miss. Avoids the
        // 0 * inf = NaN case in the general arithmetic below.
        if (o[i] < n.lo[i] || o[i] > n.hi[i]) return false;
      } else {
        double t0 = (n.lo[i] - o[i]) * inv[i];
        double t1 = (n.hi[i] - o[i]) * inv[i];
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return false;
      }
    }
    return true;
  }

  static double box_distance2(const Node& n, const Vec3& p) {
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double v = std::max({n.lo[i] - p[i], 0.0, p[i] - n.hi[i]});
      d2 += v * v;
    }
    return d2;
  }

  int build_range(int begin, int end, const std::vector<Vec3>& lo,
                  const std::vector<Vec3>& hi, const std::vector<Vec3>& centers);

  std::vector<Node> nodes_;
  std::vector<int> order_;  // face ids, grouped by leaf
};

}  // namespace luminav
