#pragma once

#include "psheaf/geometry.hpp"

namespace psheaf::alpha_geometry {

struct Ball {
  Vec3 center;
  double radius = 0.0;
};

// Smallest sphere through the vertices (circumsphere within the affine hull).
Ball edge_ball(const Vec3& a, const Vec3& b);
Ball triangle_ball(const Vec3& a, const Vec3& b, const Vec3& c);
Ball tetrahedron_ball(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Strict interior test with a relative tolerance of 1e-12 on the squared
// radius; points on the sphere count as outside.
bool strictly_inside(const Ball& ball, const Vec3& p);

}  // namespace psheaf::alpha_geometry
