#include "fixtures.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace testsupport {

using luminav::TriangleMesh;
using luminav::Vec3;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TriangleMesh single_triangle() {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  std::vector<std::array<int, 3>> f = {{0, 1, 2}};
  return TriangleMesh::from_soup(v, f);
}

void tetrahedron_soup(std::vector<Vec3>& vertices,
                      std::vector<std::array<int, 3>>& faces) {
  vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
}

TriangleMesh unit_tetrahedron() {
  std::vector<Vec3> v;
  std::vector<std::array<int, 3>> f;
  tetrahedron_soup(v, f);
  return TriangleMesh::from_soup(v, f);
}

TriangleMesh two_face_square() {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  std::vector<std::array<int, 3>> f = {{0, 1, 2}, {0, 2, 3}};
  return TriangleMesh::from_soup(v, f);
}

TriangleMesh plane_grid(int nx, int ny, double spacing) {
  std::vector<Vec3> v;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      v.push_back(Vec3(i * spacing, j * spacing, 0.0));
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> f;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return TriangleMesh::from_soup(v, f);
}

TriangleMesh box(const Vec3& lo, const Vec3& hi) {
  std::vector<Vec3> v = {
      {lo.x(), lo.y(), lo.z()}, {hi.x(), lo.y(), lo.z()},
      {hi.x(), hi.y(), lo.z()}, {lo.x(), hi.y(), lo.z()},
      {lo.x(), lo.y(), hi.z()}, {hi.x(), lo.y(), hi.z()},
      {hi.x(), hi.y(), hi.z()}, {lo.x(), hi.y(), hi.z()}};
  std::vector<std::array<int, 3>> f = {
      {0, 2, 1}, {0, 3, 2},   // bottom
      {4, 5, 6}, {4, 6, 7},   // top
      {0, 1, 5}, {0, 5, 4},   // y = lo
      {2, 3, 7}, {2, 7, 6},   // y = hi
      {1, 2, 6}, {1, 6, 5},   // x = hi
      {3, 0, 4}, {3, 4, 7}};  // x = lo
  return TriangleMesh::from_soup(v, f);
}

namespace {

void cylinder_wall(double radius, double length, int segments, int rings,
                   std::vector<Vec3>& v, std::vector<std::array<int, 3>>& f) {
  for (int r = 0; r <= rings; ++r) {
    const double z = length * r / rings;
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * kPi * s / segments;
      v.push_back(Vec3(radius * std::cos(a), radius * std::sin(a), z));
    }
  }
  const auto id = [segments](int r, int s) {
    return r * segments + (s % segments);
  };
  for (int r = 0; r < rings; ++r)
    for (int s = 0; s < segments; ++s) {
      f.push_back({id(r, s), id(r, s + 1), id(r + 1, s + 1)});
      f.push_back({id(r, s), id(r + 1, s + 1), id(r + 1, s)});
    }
}

}  // namespace

TriangleMesh open_cylinder(double radius, double length, int segments,
                           int rings) {
  std::vector<Vec3> v;
  std::vector<std::array<int, 3>> f;
  cylinder_wall(radius, length, segments, rings, v, f);
  return TriangleMesh::from_soup(v, f);
}

TriangleMesh capped_cylinder(double radius, double length, int segments,
                             int rings) {
  std::vector<Vec3> v;
  std::vector<std::array<int, 3>> f;
  cylinder_wall(radius, length, segments, rings, v, f);
  const int bottom_center = static_cast<int>(v.size());
  v.push_back(Vec3(0, 0, 0));
  const int top_center = static_cast<int>(v.size());
  v.push_back(Vec3(0, 0, length));
  const auto id = [segments](int r, int s) {
    return r * segments + (s % segments);
  };
  for (int s = 0; s < segments; ++s) {
    f.push_back({bottom_center, id(0, s + 1), id(0, s)});
    f.push_back({top_center, id(rings, s), id(rings, s + 1)});
  }
  return TriangleMesh::from_soup(v, f);
}

TriangleMesh icosphere(double radius, int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0},
                         {1, -phi, 0}, {0, -1, phi},  {0, 1, phi},
                         {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1},
                         {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec3& p : v) p = p.normalized() * radius;
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    const auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(v.size());
      v.push_back(((v[a] + v[b]) * 0.5).normalized() * radius);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(f.size() * 4);
    for (const auto& t : f) {
      const int ab = mid(t[0], t[1]);
      const int bc = mid(t[1], t[2]);
      const int ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  return TriangleMesh::from_soup(v, f);
}

}  // namespace testsupport
