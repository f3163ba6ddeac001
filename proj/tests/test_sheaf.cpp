#include <gtest/gtest.h>

#include <cmath>

#include "psheaf/errors.hpp"
#include "psheaf/oracle.hpp"
#include "psheaf/sheaf.hpp"
#include "test_support.hpp"

using namespace psheaf;

namespace {

struct Triangle {
  LabeledPointCloud cloud;
  FilteredComplex fc;
};

Triangle triangle(const std::vector<Vec3>& p, const std::vector<double>& q) {
  auto cloud = test::cloud_of(p, q);
  auto fc = build_vr(pairwise_distances(cloud, DistanceSpec::euclidean()), 2);
  return {std::move(cloud), std::move(fc)};
}

std::vector<std::size_t> all_indices(const FilteredComplex& fc) {
  std::vector<std::size_t> v(fc.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

}  // namespace

TEST(Restriction, VertexToEdge) {
  const auto t = triangle({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 3, 0)}, {0.5, -0.8, 0.3});
  const auto w = SheafWeighting::from_cloud(t.cloud);
  EXPECT_NEAR(restriction_scalar(Simplex{0}, Simplex{0, 1}, t.cloud, w), -0.8 / 2.0, 1e-15);
  EXPECT_NEAR(restriction_scalar(Simplex{1}, Simplex{0, 1}, t.cloud, w), 0.5 / 2.0, 1e-15);
  EXPECT_EQ(restriction_scalar(Simplex{0, 1}, Simplex{0, 1}, t.cloud, w), 1.0);
}

TEST(Restriction, EdgeToTriangle) {
  const auto t = triangle({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 3, 0)}, {0.5, -0.8, 0.3});
  const auto w = SheafWeighting::from_cloud(t.cloud);
  const double r02 = 3.0, r12 = std::sqrt(13.0);
  EXPECT_NEAR(restriction_scalar(Simplex{0, 1}, Simplex{0, 1, 2}, t.cloud, w), 0.3 / (r02 * r12), 1e-15);
  const double composed = restriction_scalar(Simplex{0, 1}, Simplex{0, 1, 2}, t.cloud, w) *
                          restriction_scalar(Simplex{0}, Simplex{0, 1}, t.cloud, w);
  EXPECT_NEAR(restriction_scalar(Simplex{0}, Simplex{0, 1, 2}, t.cloud, w), composed, 1e-15);
}

TEST(Restriction, ErrorsForNonFaceAndUnknownVertex) {
  const auto t = triangle({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 3, 0)}, {1, 1, 1});
  const auto w = SheafWeighting::from_cloud(t.cloud);
  EXPECT_THROW(restriction_scalar(Simplex{0, 1}, Simplex{0, 2}, t.cloud, w), Error);
  try {
    restriction_scalar(Simplex{2}, Simplex{0, 1}, t.cloud, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAFace);
  }
  EXPECT_THROW(restriction_scalar(Simplex{0}, Simplex{0, 3}, t.cloud, w), Error);
}

TEST(Restriction, TrivialWeightingIsAllOnes) {
  const auto t = triangle({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 3, 0)}, {0.5, -0.8, 0.3});
  const auto w = SheafWeighting::trivial(3);
  EXPECT_EQ(restriction_scalar(Simplex{0}, Simplex{0, 1, 2}, t.cloud, w), 1.0);
  EXPECT_EQ(restriction_scalar(Simplex{1, 2}, Simplex{0, 1, 2}, t.cloud, w), 1.0);
}

TEST(Coboundary, SingleEdgeWithCharges) {
  const auto cloud = test::cloud_of({Vec3(0, 0, 0), Vec3(1, 0, 0)}, {1.0, 0.01});
  const auto fc = build_vr(pairwise_distances(cloud, DistanceSpec::euclidean()), 1);
  const auto all = all_indices(fc);
  const auto d0 = coboundary_matrix(fc, all, 0, cloud, SheafWeighting::from_cloud(cloud));
  const Eigen::MatrixXd dense(d0.entries);
  ASSERT_EQ(dense.rows(), 1);
  ASSERT_EQ(dense.cols(), 2);
  EXPECT_NEAR(dense(0, 0), -0.01, 1e-15);
  EXPECT_NEAR(dense(0, 1), 1.0, 1e-15);
  const auto trivial = coboundary_matrix(fc, all, 0, cloud, SheafWeighting::from_cloud(test::cloud_of({Vec3(0, 0, 0), Vec3(1, 0, 0)})));
  const Eigen::MatrixXd t(trivial.entries);
  EXPECT_EQ(t(0, 0), -1.0);
  EXPECT_EQ(t(0, 1), 1.0);
}

TEST(Coboundary, TriangleComposesToZero) {
  const auto t = triangle({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0.4, 1.7, 0.2)}, {0.7, -0.2, 0.9});
  const auto w = SheafWeighting::from_cloud(t.cloud);
  const auto check = oracle::cochain_check(t.fc, t.cloud, w);
  EXPECT_TRUE(check.pass()) << check.residual;
  const auto all = all_indices(t.fc);
  const auto d0 = coboundary_matrix(t.fc, all, 0, t.cloud, w);
  const auto d1 = coboundary_matrix(t.fc, all, 1, t.cloud, w);
  EXPECT_EQ(d0.entries.rows(), 3);
  EXPECT_EQ(d1.entries.rows(), 1);
  const Eigen::MatrixXd prod = Eigen::MatrixXd(d1.entries) * Eigen::MatrixXd(d0.entries);
  EXPECT_LE(prod.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Coboundary, RejectsSubsetThatIsNotFaceClosed) {
  const auto t = triangle({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 3, 0)}, {1, 1, 1});
  const std::vector<std::size_t> edge_only{static_cast<std::size_t>(t.fc.find(Simplex{0, 1}))};
  EXPECT_THROW(coboundary_matrix(t.fc, edge_only, 0, t.cloud, SheafWeighting::from_cloud(t.cloud)), Error);
}

TEST(Composition, HoldsOnRandomTriangles) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> charge(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = test::random_points(rng, 3, 5.0, 0.2);
    std::vector<double> q;
    while (q.size() < 3) {
      const double c = charge(rng);
      if (c != 0.0) q.push_back(c);
    }
    const auto t = triangle(p, q);
    const auto report = check_composition(t.cloud, SheafWeighting::from_cloud(t.cloud), t.fc);
    EXPECT_TRUE(report.ok()) << "trial " << trial;
    EXPECT_GT(report.chains_checked, 0u);
  }
}

TEST(Coboundary, FaultHookFlipsOneSign) {
  const auto cloud = test::cloud_of({Vec3(0, 0, 0), Vec3(1, 0, 0)}, {1.0, 0.5});
  const auto fc = build_vr(pairwise_distances(cloud, DistanceSpec::euclidean()), 1);
  const auto all = all_indices(fc);
  const auto w = SheafWeighting::from_cloud(cloud);
  const Eigen::MatrixXd clean(coboundary_matrix(fc, all, 0, cloud, w).entries);
  psheaf::testing::set_coboundary_fault(true);
  const Eigen::MatrixXd faulty(coboundary_matrix(fc, all, 0, cloud, w).entries);
  psheaf::testing::set_coboundary_fault(false);
  EXPECT_EQ((clean - faulty).cwiseAbs().maxCoeff(), 2 * std::abs(clean(0, 0)));
}
