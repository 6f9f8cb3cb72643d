#pragma once

// Parametric micro-fixtures built in memory. Vertices lie exactly on the
// analytic surfaces they sample, so symmetry-aligned queries (rays through
// vertices, points on vertex columns) can be checked against closed-form
// answers at floating-point tolerance.

#include <array>
#include <vector>

#include "luminav/mesh.hpp"
#include "luminav/types.hpp"

namespace testsupport {

/// One triangle (0,0,0), (1,0,0), (0,1,0): area 1/2, normal +z or -z.
luminav::TriangleMesh single_triangle();

/// Closed unit tetrahedron: corners (0,0,0), (1,0,0), (0,1,0), (0,0,1).
luminav::TriangleMesh unit_tetrahedron();

/// Open unit square in z = 0, split along the diagonal into two faces.
luminav::TriangleMesh two_face_square();

/// Open flat grid in z = 0 covering [0, nx*spacing] x [0, ny*spacing],
/// 2*nx*ny faces.
luminav::TriangleMesh plane_grid(int nx, int ny, double spacing);

/// Axis-aligned closed box [lo, hi], 12 faces.
luminav::TriangleMesh box(const luminav::Vec3& lo, const luminav::Vec3& hi);

/// Closed cylinder of the given radius along +z from z=0 to z=length.
/// Wall vertices sit exactly on the analytic cylinder at angles
/// 2*pi*k/segments; caps are fans around exact center vertices.
luminav::TriangleMesh capped_cylinder(double radius, double length,
                                      int segments, int rings);

/// Same wall, no caps (open tube).
luminav::TriangleMesh open_cylinder(double radius, double length,
                                    int segments, int rings);

/// Icosphere: subdivided icosahedron with every vertex renormalized onto
/// the sphere of the given radius, centered at the origin.
luminav::TriangleMesh icosphere(double radius, int subdivisions);

/// Raw soup for the closed tetrahedron, for tests that drive
/// TriangleMesh::from_soup directly.
void tetrahedron_soup(std::vector<luminav::Vec3>& vertices,
                      std::vector<std::array<int, 3>>& faces);

}  // namespace testsupport
