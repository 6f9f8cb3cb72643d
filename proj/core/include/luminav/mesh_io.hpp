#pragma once

#include <array>
#include <string>
#include <vector>

#include "luminav/mesh.hpp"
#include "luminav/types.hpp"

namespace luminav {

enum class MeshFormat { auto_detect, stl_binary, stl_ascii, obj };

/// Accepts "auto", "stl-binary", "stl-ascii", "obj". Throws ConfigError on
/// anything else.
MeshFormat parse_mesh_format(const std::string& name);

/// Reads a surface mesh and runs the ingestion cleaning pipeline (weld,
/// degenerate-face removal, orientation). Coordinates are multiplied by
/// `scale` before cleaning; units are millimeters after scaling. With
/// auto_detect the format is resolved from the extension and, for .stl,
/// from the record-size check that separates binary from ASCII. OBJ
/// parsing keeps vertex positions and faces only; polygons are fan
/// triangulated and all other records are ignored.
/// Throws MeshLoadError on I/O or parse failure, TopologyError from
/// cleaning, ConfigError if scale <= 0.
TriangleMesh load_mesh(const std::string& path,
                       MeshFormat format = MeshFormat::auto_detect,
                       double scale = 1.0);

/// Writes a binary STL (normals recomputed from winding). Used by fixture
/// generators and round-trip tests.
void write_stl_binary(const std::string& path,
                      const std::vector<Vec3>& vertices,
                      const std::vector<std::array<int, 3>>& faces);
void write_stl_binary(const std::string& path, const TriangleMesh& mesh);

}  // namespace luminav
