#include "luminav/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <unordered_map>

#include "luminav/bvh.hpp"
#include "luminav/log.hpp"
#include "luminav/queries.hpp"

namespace luminav {

namespace {

constexpr double kDegenerateArea = 1e-12;  // mm^2

struct CellKey {
  int64_t x, y, z;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellKeyHash {
  size_t operator()(const CellKey& k) const {
    uint64_t h = 1469598103934665603ULL;
    for (int64_t v : {k.x, k.y, k.z}) {
      h ^= static_cast<uint64_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<size_t>(h);
  }
};

// Welds vertices closer than tol. Returns the vertex remap; fills `welded`.
std::vector<int> weld_vertices(const std::vector<Vec3>& in, double tol,
                               std::vector<Vec3>& out, int& welded) {
  std::unordered_map<CellKey, std::vector<int>, CellKeyHash> grid;
  std::vector<int> remap(in.size(), -1);
  welded = 0;
  const double inv = 1.0 / tol;
  for (size_t i = 0; i < in.size(); ++i) {
    const Vec3& p = in[i];
    const int64_t cx = static_cast<int64_t>(std::floor(p.x() * inv));
    const int64_t cy = static_cast<int64_t>(std::floor(p.y() * inv));
    const int64_t cz = static_cast<int64_t>(std::floor(p.z() * inv));
    int found = -1;
    for (int64_t dx = -1; dx <= 1 && found < 0; ++dx)
      for (int64_t dy = -1; dy <= 1 && found < 0; ++dy)
        for (int64_t dz = -1; dz <= 1 && found < 0; ++dz) {
          auto it = grid.find(CellKey{cx + dx, cy + dy, cz + dz});
          if (it == grid.end()) continue;
          for (int cand : it->second) {
            if ((out[cand] - p).norm() <= tol) {
              found = cand;
              break;
            }
          }
        }
    if (found >= 0) {
      remap[i] = found;
      ++welded;
    } else {
      const int id = static_cast<int>(out.size());
      out.push_back(p);
      grid[CellKey{cx, cy, cz}].push_back(id);
      remap[i] = id;
    }
  }
  return remap;
}

struct EdgeUse {
  int face;
  int slot;  // edge slot within the face (0..2)
};

using EdgeMap = std::map<std::pair<int, int>, std::vector<EdgeUse>>;

EdgeMap build_edge_map(const std::vector<std::array<int, 3>>& faces) {
  EdgeMap edges;
  for (size_t f = 0; f < faces.size(); ++f) {
    for (int e = 0; e < 3; ++e) {
      int a = faces[f][e];
      int b = faces[f][(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edges[{a, b}].push_back({static_cast<int>(f), e});
    }
  }
  return edges;
}

// True if face (cyclically) contains the directed edge a->b.
bool has_directed_edge(const std::array<int, 3>& tri, int a, int b) {
  for (int e = 0; e < 3; ++e) {
    if (tri[e] == a && tri[(e + 1) % 3] == b) return true;
  }
  return false;
}

Vec3 raw_normal(const std::vector<Vec3>& v, const std::array<int, 3>& tri) {
  return (v[tri[1]] - v[tri[0]]).cross(v[tri[2]] - v[tri[0]]);
}

}  // namespace

TriangleMesh::TriangleMesh(TriangleMesh&&) noexcept = default;
TriangleMesh& TriangleMesh::operator=(TriangleMesh&&) noexcept = default;
TriangleMesh::~TriangleMesh() = default;

TriangleMesh TriangleMesh::from_soup(const std::vector<Vec3>& in_vertices,
                                     const std::vector<std::array<int, 3>>& in_faces,
                                     double weld_tol,
                                     double max_nonmanifold_fraction) {
  TriangleMesh mesh;
  mesh.repair_.input_vertices = static_cast<int>(in_vertices.size());
  mesh.repair_.input_faces = static_cast<int>(in_faces.size());

  for (const auto& tri : in_faces) {
    for (int idx : tri) {
      if (idx < 0 || idx >= static_cast<int>(in_vertices.size()))
        throw MeshLoadError("face references vertex " + std::to_string(idx) +
                            " out of range");
    }
  }

  std::vector<Vec3> verts;
  std::vector<int> remap = weld_vertices(in_vertices, weld_tol, verts, mesh.repair_.welded_vertices);

  std::vector<std::array<int, 3>> faces;
  faces.reserve(in_faces.size());
  for (const auto& tri : in_faces) {
    std::array<int, 3> t = {remap[tri[0]], remap[tri[1]], remap[tri[2]]};
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      ++mesh.repair_.dropped_faces;
      continue;
    }
    if (0.5 * raw_normal(verts, t).norm() <= kDegenerateArea) {
      ++mesh.repair_.dropped_faces;
      continue;
    }
    faces.push_back(t);
  }

  // Topology pass: count boundary and non-manifold edges before any reorientation.
  {
    EdgeMap edges = build_edge_map(faces);
    int nonmanifold = 0, boundary = 0;
    for (const auto& [key, uses] : edges) {
      if (uses.size() == 1) ++boundary;
      if (uses.size() > 2) ++nonmanifold;
    }
    mesh.repair_.nonmanifold_edges = nonmanifold;
    mesh.repair_.boundary_edges = boundary;
    if (!edges.empty() &&
        static_cast<double>(nonmanifold) / static_cast<double>(edges.size()) >
            max_nonmanifold_fraction) {
      throw TopologyError("mesh has " + std::to_string(nonmanifold) +
                          " non-manifold edges out of " + std::to_string(edges.size()) +
                          " (limit " + std::to_string(max_nonmanifold_fraction * 100.0) + "%)");
    }

    // Connected components over manifold edges, with winding made consistent
    // inside each component (shared edges traversed in opposite directions).
    std::vector<int> component(faces.size(), -1);
    std::vector<std::vector<int>> component_faces;
    for (size_t seed = 0; seed < faces.size(); ++seed) {
      if (component[seed] >= 0) continue;
      const int cid = static_cast<int>(component_faces.size());
      component_faces.emplace_back();
      std::deque<int> queue{static_cast<int>(seed)};
      component[seed] = cid;
      while (!queue.empty()) {
        const int f = queue.front();
        queue.pop_front();
        component_faces[cid].push_back(f);
        for (int e = 0; e < 3; ++e) {
          int a = faces[f][e];
          int b = faces[f][(e + 1) % 3];
          int lo = std::min(a, b), hi = std::max(a, b);
          const auto& uses = edges.at({lo, hi});
          if (uses.size() != 2) continue;
          const int g = (uses[0].face == f) ? uses[1].face : uses[0].face;
          if (component[g] >= 0) {
            if (component[g] == cid && has_directed_edge(faces[g], a, b))
              log_warn_once("non-orientable", "mesh component is non-orientable");
            continue;
          }
          // f traverses a->b, so a consistently wound neighbor traverses b->a.
          if (has_directed_edge(faces[g], a, b)) std::swap(faces[g][1], faces[g][2]);
          component[g] = cid;
          queue.push_back(g);
        }
      }
    }
    mesh.repair_.components = static_cast<int>(component_faces.size());

    // Per-component vote: probe face centroids offset along +/-normal and
    // keep the orientation whose normal side is the enclosed volume.
    const Vec3* vdata = verts.data();
    Aabb bb;
    if (!verts.empty()) {
      bb.min = bb.max = verts[0];
      for (const Vec3& p : verts) {
        bb.min = bb.min.cwiseMin(p);
        bb.max = bb.max.cwiseMax(p);
      }
    }
    for (auto& comp : component_faces) {
      const size_t stride = std::max<size_t>(1, comp.size() / 32);
      int votes_in = 0, votes_out = 0;
      for (size_t k = 0; k < comp.size(); k += stride) {
        const auto& t = faces[comp[k]];
        const Vec3 n2 = raw_normal(verts, t);
        const double area = 0.5 * n2.norm();
        if (area <= kDegenerateArea) continue;
        const Vec3 n = n2.normalized();
        const Vec3 c = (vdata[t[0]] + vdata[t[1]] + vdata[t[2]]) / 3.0;
        double h = std::clamp(1e-3 * bb.diagonal(), 10.0 * weld_tol,
                              0.25 * std::sqrt(area));
        const double w_plus = std::abs(winding_number_raw(verts, faces, comp, c + h * n));
        const double w_minus = std::abs(winding_number_raw(verts, faces, comp, c - h * n));
        if (w_plus > 0.5 && w_minus < 0.5) ++votes_in;
        if (w_minus > 0.5 && w_plus < 0.5) ++votes_out;
      }
      if (votes_out > votes_in) {
        for (int f : comp) std::swap(faces[f][1], faces[f][2]);
        ++mesh.repair_.flipped_components;
      }
    }
  }

  // Final connectivity and derived quantities from the oriented faces.
  mesh.vertices_ = std::move(verts);
  mesh.faces_ = std::move(faces);
  mesh.neighbors_.assign(mesh.faces_.size(), {-1, -1, -1});
  {
    EdgeMap edges = build_edge_map(mesh.faces_);
    for (const auto& [key, uses] : edges) {
      if (uses.size() != 2) continue;
      mesh.neighbors_[uses[0].face][uses[0].slot] = uses[1].face;
      mesh.neighbors_[uses[1].face][uses[1].slot] = uses[0].face;
    }
  }

  mesh.face_normals_.resize(mesh.faces_.size());
  mesh.face_areas_.resize(mesh.faces_.size());
  mesh.cumulative_area_.resize(mesh.faces_.size());
  double acc = 0.0;
  for (size_t f = 0; f < mesh.faces_.size(); ++f) {
    const Vec3 n2 = raw_normal(mesh.vertices_, mesh.faces_[f]);
    mesh.face_areas_[f] = 0.5 * n2.norm();
    mesh.face_normals_[f] = n2.normalized();
    acc += mesh.face_areas_[f];
    mesh.cumulative_area_[f] = acc;
  }
  mesh.total_area_ = acc;

  if (!mesh.vertices_.empty()) {
    mesh.bounds_.min = mesh.bounds_.max = mesh.vertices_[0];
    for (const Vec3& p : mesh.vertices_) {
      mesh.bounds_.min = mesh.bounds_.min.cwiseMin(p);
      mesh.bounds_.max = mesh.bounds_.max.cwiseMax(p);
    }
  }
  return mesh;
}

int TriangleMesh::directed_adjacency_count() const {
  int count = 0;
  for (const auto& n : neighbors_)
    for (int e = 0; e < 3; ++e)
      if (n[e] >= 0) ++count;
  return count;
}

Vec3 TriangleMesh::face_centroid(int f) const {
  const auto& t = faces_[f];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

Vec3 TriangleMesh::barycentric(int f, const Vec3& p) const {
  const auto& t = faces_[f];
  const Vec3& a = vertices_[t[0]];
  const Vec3 e0 = vertices_[t[1]] - a;
  const Vec3 e1 = vertices_[t[2]] - a;
  const Vec3 d = p - a;
  const double d00 = e0.dot(e0), d01 = e0.dot(e1), d11 = e1.dot(e1);
  const double d20 = d.dot(e0), d21 = d.dot(e1);
  const double denom = d00 * d11 - d01 * d01;
  const double v = (d11 * d20 - d01 * d21) / denom;
  const double w = (d00 * d21 - d01 * d20) / denom;
  return Vec3(1.0 - v - w, v, w);
}

bool TriangleMesh::on_face(const Vec3& p, int f, double plane_tol, double bary_tol) const {
  if (f < 0 || f >= num_faces()) return false;
  const double dist = std::abs(face_normals_[f].dot(p - vertices_[faces_[f][0]]));
  if (dist > plane_tol) return false;
  const Vec3 b = barycentric(f, p);
  return b.minCoeff() >= -bary_tol && b.maxCoeff() <= 1.0 + bary_tol;
}

SurfacePoint TriangleMesh::surface_point(int f, double u, double v) const {
  const auto& t = faces_[f];
  SurfacePoint sp;
  sp.face_id = f;
  sp.position = (1.0 - u - v) * vertices_[t[0]] + u * vertices_[t[1]] + v * vertices_[t[2]];
  return sp;
}

void TriangleMesh::build_bvh() {
  if (!bvh_) bvh_ = std::make_unique<Bvh>(*this);
}

}  // namespace luminav
