#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/Dense>

#include "psheaf/alpha_geometry.hpp"
#include "psheaf/delaunay.hpp"
#include "psheaf/errors.hpp"
#include "psheaf/filtration.hpp"

namespace psheaf {

namespace alpha_geometry {

Ball edge_ball(const Vec3& a, const Vec3& b) {
  return {0.5 * (a + b), 0.5 * (a - b).norm()};
}

Ball triangle_ball(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u = b - a;
  const Vec3 v = c - a;
  const Vec3 w = u.cross(v);
  const double w2 = w.squaredNorm();
  if (w2 == 0.0) {
    throw Error(ErrorCode::DegenerateInput, "collinear triangle has no circumcircle");
  }
  const Vec3 offset = (u.squaredNorm() * v - v.squaredNorm() * u).cross(w) / (2.0 * w2);
  // abc / (4 * area) is better conditioned than |offset| for the radius.
  const double ab = u.norm(), ac = v.norm(), bc = (c - b).norm();
  const double radius = ab * ac * bc / (2.0 * std::sqrt(w2));
  return {a + offset, radius};
}

Ball tetrahedron_ball(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  Eigen::Matrix3d m;
  m.row(0) = (b - a).transpose();
  m.row(1) = (c - a).transpose();
  m.row(2) = (d - a).transpose();
  const Vec3 rhs(0.5 * (b - a).squaredNorm(), 0.5 * (c - a).squaredNorm(),
                 0.5 * (d - a).squaredNorm());
  const Vec3 x = m.colPivHouseholderQr().solve(rhs);
  return {a + x, x.norm()};
}

bool strictly_inside(const Ball& ball, const Vec3& p) {
  const double r2 = ball.radius * ball.radius;
  return (p - ball.center).squaredNorm() < r2 * (1.0 - 1e-12);
}

}  // namespace alpha_geometry

FilteredComplex build_alpha(const LabeledPointCloud& cloud) {
  using namespace alpha_geometry;
  if (cloud.size() < 2) {
    throw Error(ErrorCode::DegenerateInput, "alpha complex needs at least 2 points");
  }
  std::vector<Vec3> pts;
  pts.reserve(cloud.size());
  for (const auto& p : cloud.points()) pts.push_back(p.coords);
  const DelaunayComplex del = delaunay_3d(pts);

  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> tet_value(del.tetrahedra.size());
  for (std::size_t i = 0; i < del.tetrahedra.size(); ++i) {
    const auto& t = del.tetrahedra[i];
    tet_value[i] = tetrahedron_ball(pts[t[0]], pts[t[1]], pts[t[2]], pts[t[3]]).radius;
  }

  std::unordered_map<Simplex, std::size_t, SimplexHash> tri_index;
  for (std::size_t i = 0; i < del.triangles.size(); ++i) {
    const auto& t = del.triangles[i];
    tri_index.emplace(Simplex{t[0], t[1], t[2]}, i);
  }
  std::vector<double> tri_coface_min(del.triangles.size(), kInf);
  std::vector<bool> tri_gabriel(del.triangles.size(), true);
  std::vector<Ball> tri_ball(del.triangles.size());
  for (std::size_t i = 0; i < del.triangles.size(); ++i) {
    const auto& t = del.triangles[i];
    tri_ball[i] = triangle_ball(pts[t[0]], pts[t[1]], pts[t[2]]);
  }
  for (std::size_t i = 0; i < del.tetrahedra.size(); ++i) {
    const auto& t = del.tetrahedra[i];
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> f{};
      int n = 0;
      for (int j = 0; j < 4; ++j) {
        if (j != k) f[n++] = t[j];
      }
      const std::size_t fi = tri_index.at(Simplex{f[0], f[1], f[2]});
      tri_coface_min[fi] = std::min(tri_coface_min[fi], tet_value[i]);
      if (strictly_inside(tri_ball[fi], pts[t[k]])) tri_gabriel[fi] = false;
    }
  }
  std::vector<double> tri_value(del.triangles.size());
  for (std::size_t i = 0; i < del.triangles.size(); ++i) {
    tri_value[i] = tri_gabriel[i] ? std::min(tri_ball[i].radius, tri_coface_min[i])
                                  : tri_coface_min[i];
  }

  std::unordered_map<Simplex, std::size_t, SimplexHash> edge_index;
  for (std::size_t i = 0; i < del.edges.size(); ++i) {
    edge_index.emplace(Simplex{del.edges[i][0], del.edges[i][1]}, i);
  }
  std::vector<double> edge_coface_min(del.edges.size(), kInf);
  std::vector<bool> edge_gabriel(del.edges.size(), true);
  for (std::size_t i = 0; i < del.triangles.size(); ++i) {
    const auto& t = del.triangles[i];
    for (int k = 0; k < 3; ++k) {
      const int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
      const std::size_t ei = edge_index.at(Simplex{a, b});
      edge_coface_min[ei] = std::min(edge_coface_min[ei], tri_value[i]);
      if (strictly_inside(edge_ball(pts[a], pts[b]), pts[t[k]])) edge_gabriel[ei] = false;
    }
  }

  std::vector<FilteredSimplex> out;
  out.reserve(cloud.size() + del.edges.size() + del.triangles.size());
  for (int i = 0; i < static_cast<int>(cloud.size()); ++i) out.push_back({Simplex{i}, 0.0});
  for (std::size_t i = 0; i < del.edges.size(); ++i) {
    const auto& e = del.edges[i];
    const double r = edge_ball(pts[e[0]], pts[e[1]]).radius;
    const double value =
        edge_gabriel[i] ? std::min(r, edge_coface_min[i]) : edge_coface_min[i];
    out.push_back({Simplex{e[0], e[1]}, value});
  }
  for (std::size_t i = 0; i < del.triangles.size(); ++i) {
    const auto& t = del.triangles[i];
    out.push_back({Simplex{t[0], t[1], t[2]}, tri_value[i]});
  }
  return FilteredComplex(std::move(out), ComplexKind::Alpha, 2, cloud.size());
}

}  // namespace psheaf
