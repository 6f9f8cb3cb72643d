#include "luminav/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace luminav {

namespace {

struct Soup {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MeshLoadError("cannot open mesh file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof())
    throw MeshLoadError("read error on mesh file: " + path);
  return buf.str();
}

std::string lower_ext(const std::string& path) {
  const size_t dot = path.find_last_of('.');
  const size_t slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

uint32_t read_u32_le(const char* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;  // build targets are little-endian
}

float read_f32_le(const char* p) {
  float v;
  std::memcpy(&v, p, 4);
  return v;
}

/// The 84 + 50 * count size identity is the reliable binary test; a "solid"
/// prefix alone is not, since some exporters write it into binary headers.
bool looks_binary_stl(const std::string& data) {
  if (data.size() < 84) return false;
  const uint64_t count = read_u32_le(data.data() + 80);
  return data.size() == 84 + 50 * count;
}

bool has_solid_prefix(const std::string& data) {
  size_t i = 0;
  while (i < data.size() && std::isspace(static_cast<unsigned char>(data[i])))
    ++i;
  return data.compare(i, 5, "solid") == 0;
}

MeshFormat detect_format(const std::string& path, const std::string& data) {
  const std::string ext = lower_ext(path);
  if (ext == "obj") return MeshFormat::obj;
  if (looks_binary_stl(data)) return MeshFormat::stl_binary;
  if (has_solid_prefix(data)) return MeshFormat::stl_ascii;
  if (ext == "stl")
    throw MeshLoadError("cannot tell binary from ASCII STL (bad size field "
                        "and no 'solid' header): " +
                        path);
  throw MeshLoadError("cannot detect mesh format of: " + path);
}

Soup parse_stl_binary(const std::string& path, const std::string& data) {
  if (data.size() < 84)
    throw MeshLoadError("binary STL shorter than its 84-byte header: " + path);
  const uint64_t count = read_u32_le(data.data() + 80);
  if (data.size() != 84 + 50 * count)
    throw MeshLoadError("binary STL size does not match its facet count: " +
                        path);
  Soup soup;
  soup.vertices.reserve(3 * count);
  soup.faces.reserve(count);
  for (uint64_t f = 0; f < count; ++f) {
    const char* rec = data.data() + 84 + 50 * f;
    // Skip the 12-byte stored normal; winding defines orientation here.
    std::array<int, 3> tri;
    for (int k = 0; k < 3; ++k) {
      const char* v = rec + 12 + 12 * k;
      tri[k] = static_cast<int>(soup.vertices.size());
      soup.vertices.emplace_back(read_f32_le(v), read_f32_le(v + 4),
                                 read_f32_le(v + 8));
    }
    soup.faces.push_back(tri);
  }
  return soup;
}

Soup parse_stl_ascii(const std::string& path, const std::string& data) {
  if (!has_solid_prefix(data))
    throw MeshLoadError("ASCII STL must start with 'solid': " + path);
  Soup soup;
  std::istringstream in(data);
  std::string tok;
  while (in >> tok) {
    if (tok == "vertex") {
      double x, y, z;
      if (!(in >> x >> y >> z))
        throw MeshLoadError("malformed vertex in ASCII STL: " + path);
      soup.vertices.emplace_back(x, y, z);
    } else if (tok == "solid" || tok == "endsolid") {
      // consume the optional name up to end of line
      std::string rest;
      std::getline(in, rest);
    }
    // facet/normal/outer/loop/endfacet keywords and normal components are
    // structural noise for our purposes; vertices carry the geometry.
  }
  if (soup.vertices.size() % 3 != 0)
    throw MeshLoadError("ASCII STL vertex count is not a multiple of 3: " +
                        path);
  const size_t count = soup.vertices.size() / 3;
  soup.faces.reserve(count);
  for (size_t f = 0; f < count; ++f)
    soup.faces.push_back({static_cast<int>(3 * f), static_cast<int>(3 * f + 1),
                          static_cast<int>(3 * f + 2)});
  return soup;
}

int resolve_obj_index(long raw, size_t num_vertices, const std::string& path) {
  long idx = raw;
  if (idx < 0) idx += static_cast<long>(num_vertices) + 1;  // -1 = last
  if (idx < 1 || idx > static_cast<long>(num_vertices))
    throw MeshLoadError("OBJ face index out of range: " + path);
  return static_cast<int>(idx - 1);
}

Soup parse_obj(const std::string& path, const std::string& data) {
  Soup soup;
  std::istringstream in(data);
  std::string line;
  std::vector<int> poly;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z))
        throw MeshLoadError("malformed OBJ vertex line: " + path);
      soup.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      poly.clear();
      std::string ref;
      while (ls >> ref) {
        // "i", "i/t", "i//n", "i/t/n" — only the position index matters.
        const size_t slash = ref.find('/');
        const std::string head =
            slash == std::string::npos ? ref : ref.substr(0, slash);
        size_t used = 0;
        long raw = 0;
        try {
          raw = std::stol(head, &used);
        } catch (const std::exception&) {
          throw MeshLoadError("malformed OBJ face reference '" + ref +
                              "': " + path);
        }
        if (used != head.size() || head.empty())
          throw MeshLoadError("malformed OBJ face reference '" + ref +
                              "': " + path);
        poly.push_back(resolve_obj_index(raw, soup.vertices.size(), path));
      }
      if (poly.size() < 3)
        throw MeshLoadError("OBJ face with fewer than 3 vertices: " + path);
      for (size_t k = 1; k + 1 < poly.size(); ++k)
        soup.faces.push_back({poly[0], poly[k], poly[k + 1]});
    }
    // vt/vn/g/o/s/usemtl/mtllib/# and anything else: ignored by design.
  }
  return soup;
}

}  // namespace

MeshFormat parse_mesh_format(const std::string& name) {
  if (name == "auto") return MeshFormat::auto_detect;
  if (name == "stl-binary") return MeshFormat::stl_binary;
  if (name == "stl-ascii") return MeshFormat::stl_ascii;
  if (name == "obj") return MeshFormat::obj;
  throw ConfigError("unknown mesh format '" + name +
                    "' (expected auto, stl-binary, stl-ascii, or obj)");
}

TriangleMesh load_mesh(const std::string& path, MeshFormat format,
                       double scale) {
  if (!(scale > 0.0)) throw ConfigError("mesh scale factor must be positive");
  const std::string data = read_file(path);
  if (format == MeshFormat::auto_detect) format = detect_format(path, data);

  Soup soup;
  switch (format) {
    case MeshFormat::stl_binary:
      soup = parse_stl_binary(path, data);
      break;
    case MeshFormat::stl_ascii:
      soup = parse_stl_ascii(path, data);
      break;
    case MeshFormat::obj:
      soup = parse_obj(path, data);
      break;
    case MeshFormat::auto_detect:
      break;  // unreachable
  }
  if (soup.faces.empty()) throw MeshLoadError("mesh has no faces: " + path);
  if (scale != 1.0)
    for (Vec3& v : soup.vertices) v *= scale;
  return TriangleMesh::from_soup(soup.vertices, soup.faces);
}

void write_stl_binary(const std::string& path,
                      const std::vector<Vec3>& vertices,
                      const std::vector<std::array<int, 3>>& faces) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);

  char header[80] = {};
  std::snprintf(header, sizeof(header), "binary stl");
  out.write(header, 80);
  const uint32_t count = static_cast<uint32_t>(faces.size());
  out.write(reinterpret_cast<const char*>(&count), 4);

  for (const auto& tri : faces) {
    const Vec3& a = vertices[tri[0]];
    const Vec3& b = vertices[tri[1]];
    const Vec3& c = vertices[tri[2]];
    Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    n = len > 0.0 ? Vec3(n / len) : Vec3::Zero();

    float rec[12] = {
        static_cast<float>(n.x()), static_cast<float>(n.y()),
        static_cast<float>(n.z()), static_cast<float>(a.x()),
        static_cast<float>(a.y()), static_cast<float>(a.z()),
        static_cast<float>(b.x()), static_cast<float>(b.y()),
        static_cast<float>(b.z()), static_cast<float>(c.x()),
        static_cast<float>(c.y()), static_cast<float>(c.z())};
    out.write(reinterpret_cast<const char*>(rec), 48);
    const uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
  if (!out.good()) throw IoError("write failed: " + path);
}

void write_stl_binary(const std::string& path, const TriangleMesh& mesh) {
  std::vector<Vec3> vertices(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) vertices[v] = mesh.vertex(v);
  std::vector<std::array<int, 3>> faces(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) faces[f] = mesh.face(f);
  write_stl_binary(path, vertices, faces);
}

}  // namespace luminav
