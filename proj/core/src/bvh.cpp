#include "luminav/bvh.hpp"

#include <numeric>

namespace luminav {

namespace {

// Absorbs floating-point slop in the slab test so a triangle lying exactly
// on a box face is never dropped. Candidates are filtered by the exact
// triangle test anyway, so padding only ever adds candidates.
constexpr double kBoxPad = 1e-9;

constexpr int kLeafSize = 4;

}  // namespace

Bvh::Bvh(const TriangleMesh& mesh) {
  const int n = mesh.num_faces();
  if (n == 0) return;

  std::vector<Vec3> lo(n), hi(n), centers(n);
  for (int f = 0; f < n; ++f) {
    const auto& tri = mesh.face(f);
    const Vec3& a = mesh.vertex(tri[0]);
    const Vec3& b = mesh.vertex(tri[1]);
    const Vec3& c = mesh.vertex(tri[2]);
    lo[f] = a.cwiseMin(b).cwiseMin(c).array() - kBoxPad;
    hi[f] = a.cwiseMax(b).cwiseMax(c).array() + kBoxPad;
    centers[f] = 0.5 * (lo[f] + hi[f]);
  }

  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(static_cast<size_t>(2 * n));
  build_range(0, n, lo, hi, centers);
}

int Bvh::build_range(int begin, int end, const std::vector<Vec3>& lo,
                     const std::vector<Vec3>& hi,
                     const std::vector<Vec3>& centers) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();

  Vec3 box_lo = lo[order_[begin]];
  Vec3 box_hi = hi[order_[begin]];
  Vec3 c_lo = centers[order_[begin]];
  Vec3 c_hi = c_lo;
  for (int i = begin + 1; i < end; ++i) {
    const int f = order_[i];
    box_lo = box_lo.cwiseMin(lo[f]);
    box_hi = box_hi.cwiseMax(hi[f]);
    c_lo = c_lo.cwiseMin(centers[f]);
    c_hi = c_hi.cwiseMax(centers[f]);
  }
  nodes_[index].lo = box_lo;
  nodes_[index].hi = box_hi;

  const int count = end - begin;
  if (count <= kLeafSize) {
    nodes_[index].first = begin;
    nodes_[index].count = count;
    return index;
  }

  int axis = 0;
  const Vec3 extent = c_hi - c_lo;
  if (extent[1] > extent[axis]) axis = 1;
  if (extent[2] > extent[axis]) axis = 2;

  // Median split over a total order (center, face id): balanced depth and
  // a build that does not depend on library partitioning details.
  std::sort(order_.begin() + begin, order_.begin() + end,
            [&](int fa, int fb) {
              const double ca = centers[fa][axis];
              const double cb = centers[fb][axis];
              return ca < cb || (ca == cb && fa < fb);
            });
  const int mid = begin + count / 2;

  const int left = build_range(begin, mid, lo, hi, centers);
  const int right = build_range(mid, end, lo, hi, centers);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

}  // namespace luminav
