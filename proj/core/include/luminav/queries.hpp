#pragma once

#include <array>
#include <optional>
#include <vector>

#include "luminav/mesh.hpp"
#include "luminav/random.hpp"
#include "luminav/types.hpp"

namespace luminav {

/// Area-weighted uniform sample: face chosen with probability
/// area/total_area, then a uniform barycentric point on that face.
SurfacePoint sample_point_on_anatomy(const TriangleMesh& mesh, RandomStream& rng);

struct RayHit {
  SurfacePoint point;
  double distance = 0.0;
};

/// First intersection with travel distance t > min_t, skipping exclude_face.
/// Hits landing on a shared edge are resolved to the face with the lowest id.
std::optional<RayHit> ray_intersect(const TriangleMesh& mesh, const Ray& ray,
                                    int exclude_face = -1, double min_t = 0.0);

/// Closest point on the mesh (point-to-triangle distance over all faces,
/// ties broken by lowest face id).
SurfacePoint project_to_closest_surface(const TriangleMesh& mesh, const Vec3& point);

/// Distance from `point` to the mesh surface.
double distance_to_surface(const TriangleMesh& mesh, const Vec3& point);

/// Generalized winding number of `point` with respect to the whole mesh.
/// Integer-valued on watertight meshes (up to sign, which follows the face
/// orientation); degrades gracefully on small cracks.
double winding_number(const TriangleMesh& mesh, const Vec3& point);

/// True iff the point lies in the enclosed (luminal) volume: |winding| > 0.5,
/// or the point is within kEpsPlane of the surface.
bool inside_anatomy(const TriangleMesh& mesh, const Vec3& point);

/// Neighbor across the edge first crossed when traveling from `at.position`
/// along `direction` within the face plane. Returns nullopt on a boundary
/// edge (open mesh). `direction` must be tangent to the face.
std::optional<int> adjacent_face_in_direction(const TriangleMesh& mesh,
                                              const SurfacePoint& at,
                                              const Vec3& direction);

/// First wall contact reached from an interior entry point along `axis`;
/// nullopt if the ray leaves through an open boundary.
std::optional<SurfacePoint> resolve_start(const TriangleMesh& mesh, const Vec3& entry_point,
                                          const Vec3& axis);

// ---- low-level primitives, exposed for reuse and testing ----------------

/// Closest point on triangle (a, b, c) to p.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Moller-Trumbore. On hit fills (t, u, v) with the ray parameter and the
/// barycentric coordinates of corners b and c.
bool ray_triangle_intersect(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c,
                            double& t, double& u, double& v);

/// Winding number of `point` over a subset of faces given as indices into
/// `faces`. Used during mesh cleanup before a TriangleMesh exists.
double winding_number_raw(const std::vector<Vec3>& vertices,
                          const std::vector<std::array<int, 3>>& faces,
                          const std::vector<int>& subset, const Vec3& point);

}  // namespace luminav
