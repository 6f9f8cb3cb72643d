#include "luminav/queries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "luminav/bvh.hpp"

namespace luminav {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Barycentric tolerance for ray hits; slightly inclusive so rays crossing a
// shared edge register on both faces and the tie-break picks one.
constexpr double kHitBaryEps = 1e-9;
constexpr double kHitTieEps = 1e-9;  // mm

}  // namespace

SurfacePoint sample_point_on_anatomy(const TriangleMesh& mesh, RandomStream& rng) {
  const auto& cum = mesh.cumulative_area();
  const double r = rng.uniform() * mesh.total_area();
  const auto it = std::upper_bound(cum.begin(), cum.end(), r);
  const int f = std::min(static_cast<int>(it - cum.begin()), mesh.num_faces() - 1);
  double u = rng.uniform();
  double v = rng.uniform();
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  return mesh.surface_point(f, u, v);
}

bool ray_triangle_intersect(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c,
                            double& t, double& u, double& v) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 pvec = ray.direction.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) < 1e-300) return false;
  const double inv_det = 1.0 / det;
  const Vec3 tvec = ray.origin - a;
  u = tvec.dot(pvec) * inv_det;
  if (u < -kHitBaryEps || u > 1.0 + kHitBaryEps) return false;
  const Vec3 qvec = tvec.cross(e1);
  v = ray.direction.dot(qvec) * inv_det;
  if (v < -kHitBaryEps || u + v > 1.0 + kHitBaryEps) return false;
  t = e2.dot(qvec) * inv_det;
  return true;
}

std::optional<RayHit> ray_intersect(const TriangleMesh& mesh, const Ray& ray,
                                    int exclude_face, double min_t) {
  double best_t = std::numeric_limits<double>::infinity();
  int best_face = -1;
  double best_u = 0.0, best_v = 0.0;

  auto consider = [&](int f) {
    if (f == exclude_face) return;
    const auto& tri = mesh.face(f);
    double t, u, v;
    if (!ray_triangle_intersect(ray, mesh.vertex(tri[0]), mesh.vertex(tri[1]),
                                mesh.vertex(tri[2]), t, u, v))
      return;
    if (t <= min_t) return;
    // Shared-edge hits land on several faces at the same t; keep the lowest id.
    bool better;
    if (best_face < 0)
      better = true;
    else if (t < best_t - kHitTieEps)
      better = true;
    else
      better = t <= best_t + kHitTieEps && f < best_face;
    if (better) {
      best_t = t;
      best_face = f;
      best_u = u;
      best_v = v;
    }
  };

  if (mesh.has_bvh()) {
    mesh.bvh()->for_each_ray_candidate(ray, consider);
  } else {
    for (int f = 0; f < mesh.num_faces(); ++f) consider(f);
  }

  if (best_face < 0) return std::nullopt;
  RayHit hit;
  hit.point = mesh.surface_point(best_face, best_u, best_v);
  hit.distance = best_t;
  return hit;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Ericson, Real-Time Collision Detection, 5.1.5.
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

SurfacePoint project_to_closest_surface(const TriangleMesh& mesh, const Vec3& point) {
  double best_d2 = std::numeric_limits<double>::infinity();
  int best_face = -1;
  Vec3 best_point = Vec3::Zero();

  auto consider = [&](int f) {
    const auto& tri = mesh.face(f);
    const Vec3 q = closest_point_on_triangle(point, mesh.vertex(tri[0]),
                                             mesh.vertex(tri[1]), mesh.vertex(tri[2]));
    const double d2 = (q - point).squaredNorm();
    // Total order on (distance, face id) keeps the winner independent of
    // visit order, so accelerated and linear scans agree on tie cases.
    if (d2 < best_d2 || (d2 == best_d2 && f < best_face)) {
      best_d2 = d2;
      best_face = f;
      best_point = q;
    }
  };

  if (mesh.has_bvh()) {
    mesh.bvh()->for_each_closest_candidate(point, best_d2, consider);
  } else {
    for (int f = 0; f < mesh.num_faces(); ++f) consider(f);
  }

  return SurfacePoint{best_point, best_face};
}

double distance_to_surface(const TriangleMesh& mesh, const Vec3& point) {
  const SurfacePoint sp = project_to_closest_surface(mesh, point);
  return (sp.position - point).norm();
}

double winding_number_raw(const std::vector<Vec3>& vertices,
                          const std::vector<std::array<int, 3>>& faces,
                          const std::vector<int>& subset, const Vec3& point) {
  // Solid-angle sum, van Oosterom & Strackee form.
  double sum = 0.0;
  for (int f : subset) {
    const auto& tri = faces[f];
    const Vec3 a = vertices[tri[0]] - point;
    const Vec3 b = vertices[tri[1]] - point;
    const Vec3 c = vertices[tri[2]] - point;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    sum += 2.0 * std::atan2(num, den);
  }
  return sum / (4.0 * kPi);
}

double winding_number(const TriangleMesh& mesh, const Vec3& point) {
  double sum = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& tri = mesh.face(f);
    const Vec3 a = mesh.vertex(tri[0]) - point;
    const Vec3 b = mesh.vertex(tri[1]) - point;
    const Vec3 c = mesh.vertex(tri[2]) - point;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    sum += 2.0 * std::atan2(num, den);
  }
  return sum / (4.0 * kPi);
}

bool inside_anatomy(const TriangleMesh& mesh, const Vec3& point) {
  if (std::abs(winding_number(mesh, point)) > 0.5) return true;
  // Points on the wall count as inside.
  return distance_to_surface(mesh, point) <= kEpsPlane;
}

std::optional<int> adjacent_face_in_direction(const TriangleMesh& mesh,
                                              const SurfacePoint& at,
                                              const Vec3& direction) {
  const auto& tri = mesh.face(at.face_id);
  const Vec3& n = mesh.face_normal(at.face_id);

  // For each edge, inward normal m = n x edge; exit parameter solves
  // (p + t d - a) . m = 0 with d . m < 0 (moving toward the edge).
  double best_t = std::numeric_limits<double>::infinity();
  int best_edge = -1;
  for (int e = 0; e < 3; ++e) {
    const Vec3& a = mesh.vertex(tri[e]);
    const Vec3& b = mesh.vertex(tri[(e + 1) % 3]);
    const Vec3 m = n.cross(b - a);  // points into the triangle
    const double dm = direction.dot(m);
    if (dm >= 0.0) continue;
    const double h = (at.position - a).dot(m);
    const double t = std::max(0.0, -h / dm);
    if (t < best_t) {
      best_t = t;
      best_edge = e;
    }
  }
  if (best_edge < 0) return std::nullopt;
  const int nb = mesh.neighbor(at.face_id, best_edge);
  if (nb < 0) return std::nullopt;
  return nb;
}

std::optional<SurfacePoint> resolve_start(const TriangleMesh& mesh, const Vec3& entry_point,
                                          const Vec3& axis) {
  Ray ray{entry_point, axis.normalized()};
  const auto hit = ray_intersect(mesh, ray, -1, kMinRayT);
  if (!hit) return std::nullopt;
  return hit->point;
}

}  // namespace luminav
