#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <set>

#include "psheaf/alpha_geometry.hpp"
#include "psheaf/delaunay.hpp"
#include "psheaf/errors.hpp"
#include "psheaf/filtration.hpp"
#include "psheaf/predicates.hpp"
#include "test_support.hpp"

using namespace psheaf;
namespace ag = psheaf::alpha_geometry;

namespace {

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return std::abs((b - a).cross(c - a).dot(d - a)) / 6.0;
}

// Every 4-subset whose circumsphere has no other point inside.
std::set<std::array<int, 4>> brute_force_delaunay(const std::vector<Vec3>& p) {
  std::set<std::array<int, 4>> out;
  const int n = static_cast<int>(p.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          if (tet_volume(p[a], p[b], p[c], p[d]) < 1e-9) continue;
          const auto ball = ag::tetrahedron_ball(p[a], p[b], p[c], p[d]);
          bool empty = true;
          for (int i = 0; i < n && empty; ++i) {
            if (i == a || i == b || i == c || i == d) continue;
            empty = (p[i] - ball.center).norm() >= ball.radius;
          }
          if (empty) out.insert({a, b, c, d});
        }
  return out;
}

double hull_volume_sum(const std::vector<Vec3>& p, const DelaunayComplex& dc) {
  double v = 0.0;
  for (const auto& t : dc.tetrahedra) v += tet_volume(p[t[0]], p[t[1]], p[t[2]], p[t[3]]);
  return v;
}

void expect_empty_spheres(const std::vector<Vec3>& p, const DelaunayComplex& dc) {
  for (const auto& t : dc.tetrahedra) {
    const auto ball = ag::tetrahedron_ball(p[t[0]], p[t[1]], p[t[2]], p[t[3]]);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_GE((p[i] - ball.center).norm(), ball.radius * (1 - 1e-9));
    }
  }
}

}  // namespace

TEST(Predicates, Orient3dSignsAndExactFallback) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  EXPECT_NE(predicates::orient3d(a, b, c, Vec3(0, 0, 1)), 0);
  EXPECT_EQ(predicates::orient3d(a, b, c, Vec3(0, 0, 1)), -predicates::orient3d(a, b, c, Vec3(0, 0, -1)));
  EXPECT_EQ(predicates::orient3d(a, b, c, Vec3(0.3, 0.3, 0)), 0);
  // Nearly coplanar: tiny offsets resolved exactly.
  EXPECT_EQ(predicates::orient3d(a, b, c, Vec3(0.1, 0.1, 1e-300)),
            -predicates::orient3d(a, b, c, Vec3(0.1, 0.1, -1e-300)));
}

TEST(Predicates, InsphereAndSymbolicPerturbation) {
  Vec3 a(1, 0, 0), b(0, 1, 0), c(-1, 0, 0), d(0, 0, 1);
  if (predicates::orient3d(a, b, c, d) < 0) std::swap(a, b);
  EXPECT_GT(predicates::insphere(a, b, c, d, Vec3(0, 0, 0)), 0);
  EXPECT_LT(predicates::insphere(a, b, c, d, Vec3(3, 0, 0)), 0);
  const Vec3 on(0, -1, 0);
  EXPECT_EQ(predicates::insphere(a, b, c, d, on), 0);
  const int prio[5] = {0, 1, 2, 3, 4};
  EXPECT_NE(predicates::insphere_sos(a, b, c, d, on, prio), 0);
}

TEST(Delaunay, MatchesBruteForceOnRandomClouds) {
  std::mt19937_64 rng(21);
  for (int n : {5, 8, 13, 20, 30}) {
    const auto p = test::random_points(rng, n, 10.0);
    const auto dc = delaunay_3d(p);
    const auto brute = brute_force_delaunay(p);
    std::set<std::array<int, 4>> got(dc.tetrahedra.begin(), dc.tetrahedra.end());
    EXPECT_EQ(got, brute) << "n=" << n;
  }
}

TEST(Delaunay, DegenerateLatticeTilesTheHull) {
  std::vector<Vec3> p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) p.emplace_back(1.5 * i, 1.5 * j, 1.5 * k);
  const auto dc = delaunay_3d(p);
  EXPECT_NEAR(hull_volume_sum(p, dc), 4.5 * 4.5 * 4.5, 1e-9);
  expect_empty_spheres(p, dc);
}

TEST(Delaunay, CosphericalBipyramid) {
  std::vector<Vec3> p;
  for (int i = 0; i < 12; ++i) p.emplace_back(std::cos(i * M_PI / 6), std::sin(i * M_PI / 6), 0);
  p.emplace_back(0, 0, 1);
  p.emplace_back(0, 0, -1);
  const auto dc = delaunay_3d(p);
  EXPECT_NEAR(hull_volume_sum(p, dc), 2.0, 1e-9);
}

TEST(Delaunay, PlanarAndCollinearInputs) {
  const std::vector<Vec3> square{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
  const auto dc = delaunay_3d(square);
  EXPECT_TRUE(dc.tetrahedra.empty());
  EXPECT_EQ(dc.triangles.size(), 2u);
  EXPECT_EQ(dc.edges.size(), 5u);
  const std::vector<Vec3> line{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2.5, 0, 0)};
  const auto dl = delaunay_3d(line);
  EXPECT_TRUE(dl.triangles.empty());
  EXPECT_EQ(dl.edges.size(), 2u);
  EXPECT_THROW(delaunay_3d(std::vector<Vec3>{Vec3(0, 0, 0)}), Error);
}

TEST(Delaunay, LargeCloudIsValid) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 30);
  std::vector<Vec3> p;
  for (int i = 0; i < 1500; ++i) p.emplace_back(u(rng), u(rng), u(rng));
  const auto dc = delaunay_3d(p);
  expect_empty_spheres(p, dc);
}

TEST(Alpha, TwoPointsHalfLength) {
  const auto fc = build_alpha(test::cloud_of({Vec3(0, 0, 0), Vec3(1, 0, 0)}));
  EXPECT_EQ(fc.size(), 3u);
  EXPECT_DOUBLE_EQ(fc[2].value, 0.5);
}

TEST(Alpha, EquilateralTriangleCircumradius) {
  const auto fc = build_alpha(test::cloud_of({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2, 0)}));
  const auto idx = fc.find(Simplex{0, 1, 2});
  ASSERT_GE(idx, 0);
  EXPECT_NEAR(fc[static_cast<std::size_t>(idx)].value, 1.0 / std::sqrt(3.0), 1e-12);
  for (std::size_t i = 0; i < fc.size(); ++i) {
    if (fc[i].simplex.dim() == 1) EXPECT_NEAR(fc[i].value, 0.5, 1e-12);
  }
}

TEST(Alpha, RegularTetrahedronFacesEqual) {
  const std::vector<Vec3> p{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2, 0),
                            Vec3(0.5, std::sqrt(3.0) / 6, std::sqrt(2.0 / 3.0))};
  const auto fc = build_alpha(test::cloud_of(p));
  EXPECT_EQ(fc.count_of_dim(2), 4u);
  for (std::size_t i = 0; i < fc.size(); ++i) {
    if (fc[i].simplex.dim() != 2) continue;
    const auto v = fc[i].simplex.vertices();
    const auto ball = ag::triangle_ball(p[v[0]], p[v[1]], p[v[2]]);
    EXPECT_NEAR(fc[i].value, ball.radius, 1e-12);
    EXPECT_NEAR(fc[i].value, 1.0 / std::sqrt(3.0), 1e-12);
  }
}

TEST(Alpha, ObtuseTriangleLongEdgeTakesCofaceValue) {
  // The long edge's diametral ball contains the apex, so it enters with the triangle.
  const auto fc = build_alpha(test::cloud_of({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(1, 0.2, 0)}));
  const double tri = fc[static_cast<std::size_t>(fc.find(Simplex{0, 1, 2}))].value;
  const double long_edge = fc[static_cast<std::size_t>(fc.find(Simplex{0, 1}))].value;
  EXPECT_DOUBLE_EQ(long_edge, tri);
  EXPECT_GT(tri, 1.0);
}

TEST(Alpha, ValuesMonotoneAndDelaunaySupported) {
  std::mt19937_64 rng(4);
  const auto p = test::random_points(rng, 25, 6.0);
  const auto fc = build_alpha(test::cloud_of(p));
  EXPECT_EQ(fc.max_dim(), 2);
  const auto dc = delaunay_3d(p);
  EXPECT_EQ(fc.count_of_dim(1), dc.edges.size());
  EXPECT_EQ(fc.count_of_dim(2), dc.triangles.size());
  for (std::size_t i = 0; i < fc.size(); ++i) {
    const auto& s = fc[i].simplex;
    for (std::size_t k = 0; s.dim() > 0 && k < s.size(); ++k) {
      EXPECT_LE(fc[static_cast<std::size_t>(fc.find(s.drop(k)))].value, fc[i].value);
    }
  }
}
