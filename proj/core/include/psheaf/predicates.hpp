#pragma once

#include "psheaf/geometry.hpp"

namespace psheaf::predicates {

// Sign of det[a-d; b-d; c-d]: positive when d lies below the plane through
// a, b, c oriented counterclockwise seen from above. Exact: a floating-point
// filter decides clear cases, rational arithmetic the rest.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// For positively oriented (a, b, c, d): +1 if e is strictly inside their
// circumsphere, -1 outside, 0 cospherical. Exact.
int insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e);

// insphere with simulation of simplicity on the paraboloid lift: point k is
// lifted by an infinitesimal whose magnitude grows with priority[k], so ties
// are broken consistently and never return 0 for non-coplanar (a, b, c, d).
int insphere_sos(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e,
                 const int (&priority)[5]);

}  // namespace psheaf::predicates
