#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "psheaf/errors.hpp"
#include "psheaf/filtration.hpp"
#include "test_support.hpp"

using namespace psheaf;

namespace {

FilteredComplex vr_of(const std::vector<Vec3>& pts, int max_dim) {
  return build_vr(pairwise_distances(test::cloud_of(pts), DistanceSpec::euclidean()), max_dim);
}

const Vec3 kEquilateral[3] = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2, 0)};

}  // namespace

TEST(Simplex, SortsAndValidates) {
  const Simplex s{2, 0, 1};
  EXPECT_EQ(s.dim(), 2);
  EXPECT_EQ(s[0], 0);
  EXPECT_EQ(s[2], 2);
  EXPECT_THROW((Simplex{1, 1}), Error);
  EXPECT_THROW((Simplex{0, 1, 2, 3, 4}), Error);
  EXPECT_TRUE((Simplex{0, 2}).is_face_of(Simplex{0, 1, 2}));
  EXPECT_FALSE((Simplex{0, 3}).is_face_of(Simplex{0, 1, 2}));
  EXPECT_EQ((Simplex{0, 1, 2}).drop(1), (Simplex{0, 2}));
}

TEST(VietorisRips, TwoPointsEdgeAtLength) {
  const auto fc = vr_of({Vec3(0, 0, 0), Vec3(1, 0, 0)}, 1);
  ASSERT_EQ(fc.size(), 3u);
  EXPECT_EQ(fc[0].value, 0.0);
  EXPECT_EQ(fc[1].value, 0.0);
  EXPECT_EQ(fc[2].simplex, (Simplex{0, 1}));
  EXPECT_EQ(fc[2].value, 1.0);
}

TEST(VietorisRips, EquilateralTriangleEntersAtSide) {
  const auto fc = vr_of({kEquilateral[0], kEquilateral[1], kEquilateral[2]}, 2);
  const auto idx = fc.find(Simplex{0, 1, 2});
  ASSERT_GE(idx, 0);
  EXPECT_NEAR(fc[static_cast<std::size_t>(idx)].value, 1.0, 1e-15);
}

TEST(VietorisRips, BipartiteHasNoTriangles) {
  std::mt19937_64 rng(5);
  const auto pts = test::random_points(rng, 10, 4.0);
  const auto cloud = test::cloud_of(pts);
  const auto fc = build_vr(pairwise_distances(cloud, DistanceSpec::bipartite({0, 1, 2, 3}, {4, 5, 6, 7, 8, 9})), 2);
  EXPECT_EQ(fc.count_of_dim(2), 0u);
  EXPECT_EQ(fc.count_of_dim(1), 24u);
}

TEST(VietorisRips, MaxScaleTruncates) {
  const auto cloud = test::cloud_of({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(5, 0, 0)});
  const auto fc = build_vr(pairwise_distances(cloud, DistanceSpec::euclidean()), 2, 2.0);
  EXPECT_EQ(fc.count_of_dim(1), 1u);
  EXPECT_THROW(build_vr(pairwise_distances(cloud, DistanceSpec::euclidean()), 3), Error);
}

TEST(FilteredComplex, OrderIsValueThenDimension) {
  const auto fc = vr_of({kEquilateral[0], kEquilateral[1], kEquilateral[2]}, 2);
  for (std::size_t i = 1; i < fc.size(); ++i) {
    const bool ordered = fc[i - 1].value < fc[i].value ||
                         (fc[i - 1].value == fc[i].value &&
                          fc[i - 1].simplex.dim() <= fc[i].simplex.dim());
    EXPECT_TRUE(ordered);
  }
}

TEST(FilteredComplex, RejectsMissingFaceAndNonMonotoneValues) {
  std::vector<FilteredSimplex> missing{{Simplex{0}, 0.0}, {Simplex{0, 1}, 1.0}};
  EXPECT_THROW(FilteredComplex(missing, ComplexKind::VietorisRips, 1, 2), Error);
  std::vector<FilteredSimplex> early{{Simplex{0}, 0.0}, {Simplex{1}, 0.0}, {Simplex{0, 1}, 1.0},
                                     {Simplex{2}, 0.0}, {Simplex{0, 2}, 1.0}, {Simplex{1, 2}, 1.0},
                                     {Simplex{0, 1, 2}, 0.5}};
  EXPECT_THROW(FilteredComplex(early, ComplexKind::VietorisRips, 2, 3), Error);
}

TEST(Snapshot, DeltaZeroGivesEqualSets) {
  const auto fc = vr_of({kEquilateral[0], kEquilateral[1], kEquilateral[2]}, 2);
  const auto p = snapshot_pair(fc, 0.7, 0.0);
  EXPECT_EQ(p.K, p.L);
}

TEST(Snapshot, EdgeEntersOnlyInLarger) {
  const auto fc = vr_of({Vec3(0, 0, 0), Vec3(1, 0, 0)}, 1);
  const auto p = snapshot_pair(fc, 0.9, 0.2);
  EXPECT_EQ(p.K.size(), 2u);
  EXPECT_EQ(p.L.size(), 3u);
}

TEST(Snapshot, BeyondMaxValueIsWholeComplex) {
  const auto fc = vr_of({kEquilateral[0], kEquilateral[1], kEquilateral[2]}, 2);
  const auto p = snapshot_pair(fc, 10.0, 3.0);
  EXPECT_EQ(p.K.size(), fc.size());
  EXPECT_EQ(p.L.size(), fc.size());
  EXPECT_THROW(snapshot_pair(fc, 1.0, -0.1), Error);
}

TEST(Incidence, MatchesShippedSignTable) {
  std::ifstream in(test::fixture("sign_table.txt"));
  ASSERT_TRUE(in);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<int> face, coface;
    std::string tok;
    int part = 0, sign = 0;
    while (ls >> tok) {
      if (tok == "|") {
        ++part;
      } else if (part == 0) {
        face.push_back(std::stoi(tok));
      } else if (part == 1) {
        coface.push_back(std::stoi(tok));
      } else {
        sign = std::stoi(tok);
      }
    }
    EXPECT_EQ(signed_incidence(Simplex(face), Simplex(coface)), sign) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 9);
}

TEST(Incidence, NotAFaceThrows) {
  try {
    signed_incidence(Simplex{3}, Simplex{0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAFace);
  }
  EXPECT_THROW(signed_incidence(Simplex{0}, Simplex{0, 1, 2}), Error);
}

TEST(Incidence, IntegerBoundarySquaresToZero) {
  std::mt19937_64 rng(3);
  const auto fc = vr_of(test::random_points(rng, 8, 3.0), 2);
  const auto d1 = integer_boundary_matrix(fc, 1);
  const auto d2 = integer_boundary_matrix(fc, 2);
  ASSERT_FALSE(d2.empty());
  ASSERT_FALSE(d2[0].empty());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    for (std::size_t j = 0; j < d2[0].size(); ++j) {
      int s = 0;
      for (std::size_t k = 0; k < d2.size(); ++k) s += d1[i][k] * d2[k][j];
      EXPECT_EQ(s, 0);
    }
  }
}

TEST(FilteredComplex, WriteComplexLines) {
  const auto fc = vr_of({Vec3(0, 0, 0), Vec3(1, 0, 0)}, 1);
  std::ostringstream os;
  write_complex(os, fc);
  EXPECT_EQ(os.str(), "0 0 0\n0 1 0\n1 0 1 1\n");
}
