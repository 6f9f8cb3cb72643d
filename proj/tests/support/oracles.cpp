#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "luminav/queries.hpp"
#include "luminav/random.hpp"

namespace testsupport {

using luminav::SurfacePoint;
using luminav::TriangleMesh;
using luminav::Vec3;

std::optional<OracleHit> brute_force_ray(const TriangleMesh& mesh,
                                         const Vec3& origin,
                                         const Vec3& direction,
                                         int exclude_face, double min_t,
                                         double tie_eps) {
  std::optional<OracleHit> best;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (f == exclude_face) continue;
    const Vec3& a = mesh.vertex(mesh.face(f)[0]);
    const Vec3& b = mesh.vertex(mesh.face(f)[1]);
    const Vec3& c = mesh.vertex(mesh.face(f)[2]);
    const Vec3 n = (b - a).cross(c - a);
    const double denom = n.dot(direction);
    if (std::abs(denom) < 1e-14) continue;  // parallel to the plane
    const double t = n.dot(a - origin) / denom;
    if (!(t > min_t)) continue;
    const Vec3 p = origin + t * direction;
    // Inside test: p is inside iff it is on the same side of each edge as
    // the opposite corner (cross-product sign test in the face plane).
    const double s0 = (b - a).cross(p - a).dot(n);
    const double s1 = (c - b).cross(p - b).dot(n);
    const double s2 = (a - c).cross(p - c).dot(n);
    const double slack = -1e-9 * n.squaredNorm();
    if (s0 < slack || s1 < slack || s2 < slack) continue;
    const bool better =
        !best || t < best->t - tie_eps ||
        (t <= best->t + tie_eps && f < best->face);
    if (better) best = OracleHit{t, f, p};
  }
  return best;
}

SurfacePoint brute_force_project(const TriangleMesh& mesh, const Vec3& point) {
  double best_d2 = std::numeric_limits<double>::infinity();
  int best_face = -1;
  Vec3 best_point = Vec3::Zero();
  const auto consider = [&](int f, const Vec3& candidate) {
    const double d2 = (candidate - point).squaredNorm();
    if (d2 < best_d2 || (d2 == best_d2 && f < best_face)) {
      best_d2 = d2;
      best_face = f;
      best_point = candidate;
    }
  };
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Vec3& a = mesh.vertex(mesh.face(f)[0]);
    const Vec3& b = mesh.vertex(mesh.face(f)[1]);
    const Vec3& c = mesh.vertex(mesh.face(f)[2]);
    // Corners.
    consider(f, a);
    consider(f, b);
    consider(f, c);
    // Clamped feet on each edge.
    const Vec3 edges[3][2] = {{a, b}, {b, c}, {c, a}};
    for (const auto& e : edges) {
      const Vec3 d = e[1] - e[0];
      const double len2 = d.squaredNorm();
      if (len2 <= 0.0) continue;
      double s = (point - e[0]).dot(d) / len2;
      s = std::min(1.0, std::max(0.0, s));
      consider(f, e[0] + s * d);
    }
    // Plane foot, if it falls inside the triangle.
    const Vec3 n = (b - a).cross(c - a);
    const double n2 = n.squaredNorm();
    if (n2 <= 0.0) continue;
    const Vec3 foot = point - (point - a).dot(n) / n2 * n;
    const double s0 = (b - a).cross(foot - a).dot(n);
    const double s1 = (c - b).cross(foot - b).dot(n);
    const double s2 = (a - c).cross(foot - c).dot(n);
    if (s0 >= 0.0 && s1 >= 0.0 && s2 >= 0.0) consider(f, foot);
  }
  SurfacePoint result;
  result.position = best_point;
  result.face_id = best_face;
  return result;
}

bool ray_parity_inside(const TriangleMesh& mesh, const Vec3& point) {
  // Fixed probe directions with no axis alignment; advance to the next on
  // any near-edge hit.
  static const Vec3 probes[] = {
      Vec3(0.5377, 0.1834, 0.8229).normalized(),
      Vec3(-0.3188, 0.7254, 0.6094).normalized(),
      Vec3(0.8622, -0.4336, 0.2613).normalized(),
      Vec3(-0.1241, -0.7648, 0.6322).normalized(),
      Vec3(0.3426, 0.9127, -0.2217).normalized(),
  };
  for (const Vec3& dir : probes) {
    int crossings = 0;
    bool degenerate = false;
    for (int f = 0; f < mesh.num_faces() && !degenerate; ++f) {
      const Vec3& a = mesh.vertex(mesh.face(f)[0]);
      const Vec3& b = mesh.vertex(mesh.face(f)[1]);
      const Vec3& c = mesh.vertex(mesh.face(f)[2]);
      const Vec3 n = (b - a).cross(c - a);
      const double denom = n.dot(dir);
      if (std::abs(denom) < 1e-12 * n.norm()) continue;
      const double t = n.dot(a - point) / denom;
      if (t <= 0.0) continue;
      const Vec3 p = point + t * dir;
      const double n2 = n.squaredNorm();
      const double s0 = (b - a).cross(p - a).dot(n) / n2;
      const double s1 = (c - b).cross(p - b).dot(n) / n2;
      const double s2 = (a - c).cross(p - c).dot(n) / n2;
      const double lo = std::min(s0, std::min(s1, s2));
      if (lo > 1e-10) {
        ++crossings;
      } else if (lo > -1e-10) {
        degenerate = true;  // grazes an edge or vertex; untrustworthy
      }
    }
    if (!degenerate) return (crossings % 2) == 1;
  }
  throw std::runtime_error("ray_parity_inside: all probe directions grazed");
}

namespace {

// Regularized incomplete gamma P(a, x) ("Numerical Recipes" gser/gcf).
double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0)
    throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    // Series representation.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Continued fraction for Q(a, x), Lentz's method.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  const double q = std::exp(-x + a * std::log(x) - gln) * h;
  return 1.0 - q;
}

}  // namespace

double chi_square_p_value(double statistic, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_p_value: dof <= 0");
  if (statistic <= 0.0) return 1.0;
  return 1.0 - gamma_p(dof / 2.0, statistic / 2.0);
}

double sampling_chi_square_p(const TriangleMesh& mesh, std::uint64_t seed,
                             int n) {
  luminav::RandomStream rng(seed);
  std::vector<int> counts(mesh.num_faces(), 0);
  for (int i = 0; i < n; ++i)
    ++counts[luminav::sample_point_on_anatomy(mesh, rng).face_id];
  double statistic = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const double expected = n * mesh.face_area(f) / mesh.total_area();
    const double diff = counts[f] - expected;
    statistic += diff * diff / expected;
  }
  return chi_square_p_value(statistic, mesh.num_faces() - 1);
}

double simulated_lateral_deviation(double tip_length, double takeoff_angle,
                                   double bend_angle) {
  // Parent vessel direction +x; the launch plane is x-y. The branch axis
  // leaves the apex at takeoff_angle, the bent tip at bend_angle.
  const Vec3 branch_axis(std::cos(takeoff_angle), std::sin(takeoff_angle), 0.0);
  const Vec3 tip_dir(std::cos(bend_angle), std::sin(bend_angle), 0.0);
  const Vec3 endpoint = tip_length * tip_dir;
  // Orthogonal distance from the branch centerline through the apex.
  return endpoint.cross(branch_axis).norm();
}

bool simulated_launch_fails(double branch_radius, double tip_length,
                            double takeoff_angle, double bend_angle) {
  return simulated_lateral_deviation(tip_length, takeoff_angle, bend_angle) >
         branch_radius;
}

}  // namespace testsupport
