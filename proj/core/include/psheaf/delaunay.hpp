#pragma once

#include <array>
#include <span>
#include <vector>

#include "psheaf/geometry.hpp"

namespace psheaf {

// Simplices of the 3-D Delaunay triangulation of a point set, vertex lists
// ascending, each list sorted lexicographically. Degenerate inputs
// (cospherical, coplanar, collinear) are resolved by symbolic perturbation
// of the paraboloid lift; planar or collinear sets yield their 2-D / 1-D
// Delaunay complexes because no real tetrahedron survives.
struct DelaunayComplex {
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 4>> tetrahedra;
};

// Requires >= 2 pairwise-distinct points; throws DegenerateInput otherwise.
DelaunayComplex delaunay_3d(std::span<const Vec3> points);

}  // namespace psheaf
