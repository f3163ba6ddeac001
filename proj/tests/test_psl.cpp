#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "psheaf/errors.hpp"
#include "psheaf/oracle.hpp"
#include "psheaf/psl.hpp"
#include "test_support.hpp"

using namespace psheaf;

namespace {

const std::vector<Vec3> kTriangle{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2, 0)};

FilteredComplex vr(const LabeledPointCloud& c, int max_dim) {
  return build_vr(pairwise_distances(c, DistanceSpec::euclidean()), max_dim);
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void expect_same_multiset(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  const auto sa = sorted(a), sb = sorted(b);
  double scale = 1.0;
  for (double x : sb) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < sa.size(); ++i) EXPECT_NEAR(sa[i], sb[i], tol * scale);
}

}  // namespace

TEST(Psl, SingleEdgeWithCharges) {
  const auto cloud = test::cloud_of({Vec3(0, 0, 0), Vec3(1, 0, 0)}, {1.0, 0.01});
  const auto fc = vr(cloud, 1);
  const auto op = assemble_psl(fc, snapshot_pair(fc, 2.0, 0.0), 0, cloud, SheafWeighting::from_cloud(cloud));
  const Eigen::MatrixXd m = op.matrix();
  EXPECT_NEAR(m(0, 0), 0.0001, 1e-15);
  EXPECT_NEAR(m(0, 1), -0.01, 1e-15);
  EXPECT_NEAR(m(1, 1), 1.0, 1e-15);
  const auto s = spectrum(op);
  ASSERT_EQ(s.eigenvalues.size(), 2u);
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1], 1.0001, 1e-12);
  EXPECT_EQ(s.betti, 1u);
}

TEST(Psl, SingleEdgeTrivialIsGraphLaplacian) {
  const auto cloud = test::cloud_of({Vec3(0, 0, 0), Vec3(1, 0, 0)});
  const auto fc = vr(cloud, 1);
  const auto op = assemble_psl(fc, snapshot_pair(fc, 2.0, 0.0), 0, cloud, SheafWeighting::trivial(2));
  Eigen::Matrix2d expected;
  expected << 1, -1, -1, 1;
  EXPECT_LE((op.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
  const auto s = spectrum(op);
  EXPECT_EQ(s.betti, 1u);
  ASSERT_TRUE(s.lambda_min_nonzero.has_value());
  EXPECT_NEAR(*s.lambda_min_nonzero, 2.0, 1e-12);
}

TEST(Psl, TrivialTriangleDegreeOneIsThreeIdentity) {
  const auto cloud = test::cloud_of(kTriangle);
  const auto fc = vr(cloud, 2);
  const auto op = assemble_psl(fc, snapshot_pair(fc, 2.0, 0.0), 1, cloud, SheafWeighting::trivial(3));
  EXPECT_LE((op.matrix() - 3.0 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  const auto dense = oracle::dense_psl(fc, snapshot_pair(fc, 2.0, 0.0), 1, cloud, SheafWeighting::trivial(3));
  EXPECT_LE((dense.matrix() - 3.0 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Psl, RequiresHigherSkeleton) {
  const auto cloud = test::cloud_of(kTriangle);
  const auto fc = vr(cloud, 1);
  try {
    assemble_psl(fc, snapshot_pair(fc, 2.0, 0.0), 1, cloud, SheafWeighting::trivial(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(SubspaceBasis, IdentityWhenConstraintVacuous) {
  Eigen::MatrixXd d(2, 3);
  d << 1, 2, 0, 0, 1, 3;
  const bool all_in[3] = {true, true, true};
  const auto z = persistent_subspace_basis(d, all_in);
  EXPECT_LE((z - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SubspaceBasis, OneOutsideColumn) {
  // Single edge coboundary (-q1/r, q0/r); vertex 1 outside K leaves no admissible cochain.
  Eigen::MatrixXd d(1, 2);
  d << -0.5, 1.0;
  const bool in_k[2] = {true, false};
  EXPECT_EQ(persistent_subspace_basis(d, in_k).cols(), 0);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 3);
  const bool some_in[3] = {true, false, false};
  const auto z = persistent_subspace_basis(zero, some_in);
  EXPECT_EQ(z.cols(), 2);
}

TEST(SubspaceBasis, NullSpaceIsOrthonormal) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXd d(6, 5);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 5; ++j) d(i, j) = g(rng);
  const bool in_k[5] = {true, false, true, true, false};
  const auto z = persistent_subspace_basis(d, in_k);
  EXPECT_EQ(z.cols(), 4);
  EXPECT_LE((z.transpose() * z - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((d.col(1).transpose() * z).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((d.col(4).transpose() * z).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Spectrum, SummaryOfSmallMatrices) {
  const auto a = summarize_eigenvalues({0.0, 2.0});
  EXPECT_EQ(a.betti, 1u);
  EXPECT_EQ(a.stats.count, 1.0);
  EXPECT_EQ(*a.lambda_min_nonzero, 2.0);

  const auto z = summarize_eigenvalues({0.0, 0.0, 0.0});
  EXPECT_EQ(z.betti, 3u);
  EXPECT_FALSE(z.lambda_min_nonzero.has_value());
  for (double v : z.stats.as_array()) EXPECT_EQ(v, 0.0);

  const auto i3 = summarize_eigenvalues({3.0, 3.0, 3.0});
  EXPECT_EQ(i3.betti, 0u);
  EXPECT_EQ(i3.stats.mean, 3.0);
  EXPECT_EQ(i3.stats.sum, 9.0);
  EXPECT_EQ(i3.stats.var, 0.0);
  EXPECT_EQ(i3.stats.count, 3.0);
}

TEST(Spectrum, PopulationMomentsAndMedian) {
  const auto s = SpectrumStats::of(std::vector<double>{1.0, 2.0, 4.0, 9.0});
  EXPECT_EQ(s.max, 9.0);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.mean, 4.0);
  EXPECT_EQ(s.median, 3.0);
  EXPECT_EQ(s.sum, 16.0);
  EXPECT_DOUBLE_EQ(s.var, (9.0 + 4.0 + 0.0 + 25.0) / 4.0);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(s.var));
}

TEST(Spectrum, ZeroRuleIsRelativeToLargestEigenvalue) {
  const auto s = summarize_eigenvalues({5e-9, 1e3});
  EXPECT_EQ(s.betti, 1u);  // 5e-9 <= 1e-12 + 1e-8 * 1e3
  const auto t = summarize_eigenvalues({5e-9, 0.5});
  EXPECT_EQ(t.betti, 1u);  // floor of max(lambda_max, 1)
  const auto u = summarize_eigenvalues({2e-8, 0.5});
  EXPECT_EQ(u.betti, 0u);
}

TEST(Spectrum, RejectsAsymmetricBlock) {
  PslOperator op;
  op.basis = {0, 1};
  PslBlock b;
  b.index = {0, 1};
  b.up = Eigen::MatrixXd::Zero(2, 2);
  b.up(0, 1) = 1e-6;
  b.down = Eigen::MatrixXd::Zero(2, 2);
  op.blocks.push_back(b);
  try {
    spectrum(op);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonSymmetric);
  }
}

TEST(Sweep, TwoPointsBettiSequence) {
  const auto cloud = test::cloud_of({Vec3(0, 0, 0), Vec3(5, 0, 0)});
  const auto fc = vr(cloud, 1);
  const std::vector<double> grid{3, 4, 5, 6, 7, 8, 9};
  const auto records = psl_over_filtration(fc, cloud, SheafWeighting::trivial(2), grid, 0);
  std::vector<std::size_t> betti;
  for (const auto& r : records) betti.push_back(r.summary.betti);
  EXPECT_EQ(betti, (std::vector<std::size_t>{2, 2, 1, 1, 1, 1, 1}));
  const auto dist = pairwise_distances(cloud, DistanceSpec::euclidean());
  for (const auto& r : records) EXPECT_EQ(r.summary.betti, oracle::persistent_betti0_unionfind(dist, r.t, r.t));
}

TEST(Sweep, SingleGridPointIsInstantaneous) {
  const auto cloud = test::cloud_of(kTriangle, {0.3, 0.5, 0.9});
  const auto fc = vr(cloud, 2);
  const std::vector<double> grid{1.5};
  const auto w = SheafWeighting::from_cloud(cloud);
  const auto records = psl_over_filtration(fc, cloud, w, grid, 0);
  const auto direct = spectrum(assemble_psl(fc, snapshot_pair(fc, 1.5, 0.0), 0, cloud, w));
  EXPECT_EQ(records[0].summary.eigenvalues, direct.eigenvalues);
}

TEST(Sweep, RejectsUnsortedGrid) {
  const auto cloud = test::cloud_of(kTriangle);
  const auto fc = vr(cloud, 1);
  const std::vector<double> grid{2, 1};
  EXPECT_THROW(psl_over_filtration(fc, cloud, SheafWeighting::trivial(3), grid, 0), Error);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(17);
  const auto pts = test::random_points(rng, 12, 6.0);
  const auto cloud = test::cloud_of(pts, test::random_charges(rng, 12));
  const auto fc = vr(cloud, 2);
  const std::vector<double> grid{2, 3, 4, 5, 6};
  SweepOptions one, four;
  one.threads = 1;
  four.threads = 4;
  one.delta = four.delta = 0.5;
  const auto w = SheafWeighting::from_cloud(cloud);
  for (int q = 0; q <= 1; ++q) {
    const auto a = psl_over_filtration(fc, cloud, w, grid, q, one);
    const auto b = psl_over_filtration(fc, cloud, w, grid, q, four);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].summary.eigenvalues, b[i].summary.eigenvalues);
  }
}

TEST(Psl, KEqualsLMatchesOrdinaryLaplacian) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cloud = test::cloud_of(test::random_points(rng, 9, 4.0), test::random_charges(rng, 9));
    const auto fc = vr(cloud, 2);
    const auto w = SheafWeighting::from_cloud(cloud);
    const auto pair = snapshot_pair(fc, 3.0, 0.0);
    for (int q = 0; q <= 1; ++q) {
      const auto op = assemble_psl(fc, pair, q, cloud, w);
      const auto d = coboundary_matrix(fc, pair.L, q, cloud, w);
      const Eigen::MatrixXd dd(d.entries);
      const Eigen::MatrixXd direct = dd.transpose() * dd;
      EXPECT_LE((op.up_part() - direct).cwiseAbs().maxCoeff(), 1e-12);
      const auto dense = oracle::dense_psl(fc, pair, q, cloud, w);
      EXPECT_LE((dense.up_part() - direct).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Psl, BlocksMatchDenseOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cloud = test::cloud_of(test::random_points(rng, 11, 7.0), test::random_charges(rng, 11));
    const auto fc = vr(cloud, 2);
    const auto w = SheafWeighting::from_cloud(cloud);
    for (double delta : {0.0, 0.7}) {
      const auto pair = snapshot_pair(fc, 2.5, delta);
      for (int q = 0; q <= 1; ++q) {
        const auto op = assemble_psl(fc, pair, q, cloud, w);
        const auto dense = oracle::dense_psl(fc, pair, q, cloud, w);
        expect_same_multiset(spectrum(op).eigenvalues, oracle::symmetric_eigenvalues(dense.matrix()), 1e-10);
      }
    }
  }
}

TEST(Psl, ChargeScalingByThreeScalesByNine) {
  std::mt19937_64 rng(41);
  const auto pts = test::random_points(rng, 10, 5.0);
  const auto q = test::random_charges(rng, 10);
  std::vector<double> q3;
  for (double x : q) q3.push_back(3 * x);
  const auto a = test::cloud_of(pts, q), b = test::cloud_of(pts, q3);
  const auto fc = vr(a, 2);
  for (int deg = 0; deg <= 1; ++deg) {
    for (double t : {2.0, 3.0, 4.0}) {
      const auto pair = snapshot_pair(fc, t, 0.5);
      const auto sa = spectrum(assemble_psl(fc, pair, deg, a, SheafWeighting::from_cloud(a)));
      const auto sb = spectrum(assemble_psl(fc, pair, deg, b, SheafWeighting::from_cloud(b)));
      EXPECT_EQ(sa.betti, sb.betti);
      ASSERT_EQ(sa.nonzero_eigs.size(), sb.nonzero_eigs.size());
      for (std::size_t i = 0; i < sa.nonzero_eigs.size(); ++i) {
        EXPECT_NEAR(sb.nonzero_eigs[i], 9.0 * sa.nonzero_eigs[i], 1e-9 * sb.nonzero_eigs[i]);
      }
    }
  }
}

TEST(Psl, RigidMotionAndRelabelingInvariance) {
  std::mt19937_64 rng(43);
  const auto pts = test::random_points(rng, 10, 5.0);
  const auto q = test::random_charges(rng, 10);
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  std::vector<Vec3> moved;
  for (const auto& p : pts) moved.push_back(rot * p + Vec3(4, -2, 9));
  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vec3> permuted;
  std::vector<double> permuted_q;
  for (int i : perm) {
    permuted.push_back(pts[static_cast<std::size_t>(i)]);
    permuted_q.push_back(q[static_cast<std::size_t>(i)]);
  }
  const auto base = test::cloud_of(pts, q), rigid = test::cloud_of(moved, q),
             relabeled = test::cloud_of(permuted, permuted_q);
  const std::vector<double> grid{2, 3, 4, 5};
  SweepOptions opts;
  opts.delta = 0.5;
  for (int deg = 0; deg <= 1; ++deg) {
    const auto ra = psl_over_filtration(vr(base, 2), base, SheafWeighting::from_cloud(base), grid, deg, opts);
    const auto rb = psl_over_filtration(vr(rigid, 2), rigid, SheafWeighting::from_cloud(rigid), grid, deg, opts);
    const auto rc = psl_over_filtration(vr(relabeled, 2), relabeled, SheafWeighting::from_cloud(relabeled), grid, deg, opts);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_EQ(ra[i].summary.betti, rb[i].summary.betti);
      EXPECT_EQ(ra[i].summary.betti, rc[i].summary.betti);
      expect_same_multiset(ra[i].summary.eigenvalues, rb[i].summary.eigenvalues, 1e-9);
      expect_same_multiset(ra[i].summary.eigenvalues, rc[i].summary.eigenvalues, 1e-9);
    }
  }
}

TEST(SweepIo, JsonSchema) {
  const auto cloud = test::cloud_of({Vec3(0, 0, 0), Vec3(5, 0, 0)});
  const auto fc = vr(cloud, 1);
  SweepDocument doc;
  doc.q = 0;
  doc.delta = 0.5;
  doc.grid = {3, 6};
  doc.records = psl_over_filtration(fc, cloud, SheafWeighting::trivial(2), doc.grid, 0, {0.5, {}, 1});
  doc.meta = {{"points", "x"}};
  const auto j = nlohmann::json::parse(to_json(doc));
  EXPECT_EQ(j["delta"], 0.5);
  ASSERT_EQ(j["records"].size(), 2u);
  EXPECT_EQ(j["records"][0]["betti"], 2);
  EXPECT_TRUE(j["records"][0]["lambda_min"].is_null());
  EXPECT_EQ(j["records"][1]["betti"], 1);
  EXPECT_EQ(j["records"][1]["stats"]["count"], 1.0);
  EXPECT_EQ(j["meta"]["points"], "x");
  const std::string csv = to_plot_csv(doc.records);
  EXPECT_EQ(csv.rfind("t,betti,lambda_min\n3,2,\n6,1,", 0), 0u);
  EXPECT_NEAR(std::stod(csv.substr(csv.rfind(',') + 1)), 2.0, 1e-12);
}
