#pragma once

#include <array>
#include <memory>
#include <unordered_set>
#include <vector>

#include "luminav/types.hpp"

namespace luminav {

class Bvh;

/// A point constrained to the mesh surface. `position` lies on the plane of
/// `face_id` within kEpsPlane and inside the triangle within kBaryEps.
struct SurfacePoint {
  Vec3 position = Vec3::Zero();
  int face_id = -1;
};

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();  // unit length
};

/// Target region: a set of mesh faces at the distal tips of target branches.
struct GoalRegion {
  std::unordered_set<int> face_ids;

  bool contains(int face) const { return face_ids.count(face) != 0; }
  bool empty() const { return face_ids.empty(); }
};

struct RepairStats {
  int input_vertices = 0;
  int input_faces = 0;
  int welded_vertices = 0;    // vertices merged away by the weld pass
  int dropped_faces = 0;      // degenerate faces removed
  int nonmanifold_edges = 0;  // undirected edges with >2 incident faces
  int boundary_edges = 0;     // undirected edges with exactly 1 incident face
  int flipped_components = 0; // components reversed to make normals face the lumen
  int components = 0;
};

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
  double diagonal() const { return (max - min).norm(); }
};

/// Indexed triangle surface with per-face normals, areas and edge adjacency.
/// Immutable after construction; all queries are const and thread-safe.
/// Normals are oriented to point into the vessel lumen.
class TriangleMesh {
 public:
  /// Builds a cleaned mesh from a raw triangle soup: welds duplicate
  /// vertices (weld_tol), drops degenerate faces, builds edge adjacency,
  /// orients each connected component so normals face the enclosed volume.
  /// Throws TopologyError if more than max_nonmanifold_fraction of the
  /// undirected edges are non-manifold.
  static TriangleMesh from_soup(const std::vector<Vec3>& vertices,
                                const std::vector<std::array<int, 3>>& faces,
                                double weld_tol = kWeldTol,
                                double max_nonmanifold_fraction = 0.01);

  TriangleMesh() = default;
  TriangleMesh(TriangleMesh&&) noexcept;
  TriangleMesh& operator=(TriangleMesh&&) noexcept;
  TriangleMesh(const TriangleMesh&) = delete;
  TriangleMesh& operator=(const TriangleMesh&) = delete;
  ~TriangleMesh();

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  bool empty() const { return faces_.empty(); }

  const Vec3& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& face(int f) const { return faces_[f]; }
  const Vec3& face_normal(int f) const { return face_normals_[f]; }
  double face_area(int f) const { return face_areas_[f]; }
  double total_area() const { return total_area_; }

  /// Neighbor across edge `e` of face `f` (edge e joins corners e and e+1).
  /// Returns -1 for boundary or non-manifold edges.
  int neighbor(int f, int e) const { return neighbors_[f][e]; }

  /// Total number of (face, edge) pairs that have a neighbor.
  int directed_adjacency_count() const;

  Vec3 face_centroid(int f) const;

  /// Barycentric coordinates (w0, w1, w2) of p with respect to face f,
  /// computed in the face plane.
  Vec3 barycentric(int f, const Vec3& p) const;

  bool on_face(const Vec3& p, int f, double plane_tol = kEpsPlane,
               double bary_tol = kBaryEps) const;

  /// Point at barycentric (1-u-v, u, v) on face f.
  SurfacePoint surface_point(int f, double u, double v) const;

  const Aabb& bounds() const { return bounds_; }
  const RepairStats& repair_stats() const { return repair_; }

  /// Cumulative face areas, used for area-weighted sampling.
  const std::vector<double>& cumulative_area() const { return cumulative_area_; }

  /// Optional spatial index for ray and closest-point queries. Off by
  /// default; queries fall back to a linear scan over faces. Build once
  /// before sharing the mesh across threads.
  void build_bvh();
  bool has_bvh() const { return bvh_ != nullptr; }
  const Bvh* bvh() const { return bvh_.get(); }

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<Vec3> face_normals_;
  std::vector<double> face_areas_;
  std::vector<std::array<int, 3>> neighbors_;
  std::vector<double> cumulative_area_;
  double total_area_ = 0.0;
  Aabb bounds_;
  RepairStats repair_;
  std::unique_ptr<Bvh> bvh_;
};

}  // namespace luminav
