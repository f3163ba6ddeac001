#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "psheaf/errors.hpp"
#include "psheaf/oracle.hpp"

namespace psheaf::oracle {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double max_abs_coeff(const Eigen::SparseMatrix<double>& m) {
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      out = std::max(out, std::abs(it.value()));
    }
  }
  return out;
}

}  // namespace

CochainCheck cochain_check(const FilteredComplex& fc, const LabeledPointCloud& cloud,
                           const SheafWeighting& w) {
  CochainCheck check;
  if (fc.max_dim() < 2 || fc.count_of_dim(2) == 0) return check;
  std::vector<std::size_t> all(fc.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto d0 = coboundary_matrix(fc, all, 0, cloud, w);
  const auto d1 = coboundary_matrix(fc, all, 1, cloud, w);
  const Eigen::SparseMatrix<double> prod = d1.entries * d0.entries;
  check.residual = max_abs_coeff(prod);
  check.scale = 1.0 + max_abs_coeff(d1.entries) * max_abs_coeff(d0.entries);
  return check;
}

RandomInstance make_random_instance(std::uint64_t seed, std::size_t trial) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + trial);
  const int n = 4 + static_cast<int>(rng() % 9);
  const int kind = static_cast<int>(trial % 3);
  const int charge_mode = static_cast<int>((trial / 3) % 3);

  std::vector<Vec3> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Vec3 p(uniform(rng, 0, 7), uniform(rng, 0, 7), uniform(rng, 0, 7));
    const bool far = std::all_of(pts.begin(), pts.end(),
                                 [&](const Vec3& o) { return (o - p).norm() >= 0.3; });
    if (far) pts.push_back(p);
  }
  std::vector<LabeledPoint> labeled;
  for (int i = 0; i < n; ++i) {
    double charge = 1.0;
    if (charge_mode == 0) {
      charge = uniform(rng, 0.05, 1.0) * ((rng() & 1) ? 1.0 : -1.0);
    }
    labeled.push_back({i, pts[static_cast<std::size_t>(i)], charge, ""});
  }
  LabeledPointCloud cloud(std::move(labeled));

  DistanceSpec spec = DistanceSpec::euclidean();
  if (kind == 1) {
    std::vector<int> a, b;
    for (int i = 0; i < n; ++i) (i < n / 2 ? a : b).push_back(i);
    spec = DistanceSpec::bipartite(a, b);
  }
  FilteredComplex fc = kind == 2 ? build_alpha(cloud)
                                 : build_vr(pairwise_distances(cloud, spec), 2);
  SheafWeighting w = charge_mode == 2 ? SheafWeighting::trivial(cloud.size())
                                      : SheafWeighting::from_cloud(cloud);
  static constexpr const char* kKinds[] = {"vr-euclidean", "vr-bipartite", "alpha"};
  static constexpr const char* kCharges[] = {"random-charges", "unit-charges", "trivial-sheaf"};
  std::ostringstream desc;
  desc << "trial=" << trial << " seed=" << seed << " n=" << n << ' ' << kKinds[kind] << ' '
       << kCharges[charge_mode] << " simplices=" << fc.size();
  return {desc.str(), std::move(cloud), std::move(spec), std::move(fc), std::move(w)};
}

std::vector<OracleReport> run_verification(const VerifyOptions& options) {
  std::vector<OracleReport> reports;
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const RandomInstance inst = make_random_instance(options.seed, trial);
    OracleReport report;
    report.instance = inst.descriptor;
    auto fail = [&](std::string msg) {
      report.pass = false;
      report.failures.push_back(std::move(msg));
    };

    if (options.oracle_spectra) {
      for (int q = 0; q <= 1; ++q) {
        for (double delta : options.deltas) {
          for (double t : options.grid) {
            const SnapshotPair pair = snapshot_pair(inst.complex, t, delta);
            const PslOperator engine = assemble_psl(inst.complex, pair, q, inst.cloud, inst.weighting);
            const PslOperator dense = dense_psl(inst.complex, pair, q, inst.cloud, inst.weighting);
            const Eigen::MatrixXd em = engine.matrix();
            const auto engine_eigs = symmetric_eigenvalues(em);
            const auto engine_summary = spectrum(engine);
            const auto oracle_eigs = symmetric_eigenvalues(dense.matrix());
            const auto cmp = compare_spectra(engine_summary.eigenvalues, oracle_eigs);
            const std::string where = " q=" + std::to_string(q) + " t=" + fmt(t) + " delta=" + fmt(delta);
            if (cmp.max_rel_err >= report.max_rel_err || report.engine.empty()) {
              report.max_rel_err = std::max(report.max_rel_err, cmp.max_rel_err);
              report.max_abs_err = std::max(report.max_abs_err, cmp.max_abs_err);
              report.engine = engine_summary.eigenvalues;
              report.oracle = oracle_eigs;
            }
            if (!cmp.pass(options.rel_tol)) {
              fail("spectrum mismatch" + where + " rel_err=" + fmt(cmp.max_rel_err));
            }
            if (em.size() > 0) {
              const double asym = (em - em.transpose()).cwiseAbs().maxCoeff();
              if (asym > 1e-12) fail("asymmetry " + fmt(asym) + where);
            }
            if (!engine_eigs.empty() && engine_eigs.front() < -1e-10) {
              fail("negative eigenvalue " + fmt(engine_eigs.front()) + where);
            }
          }
        }
      }
    }

    if (options.unionfind) {
      // Trivial-sheaf copy: VR on the instance distance (Euclidean for alpha).
      const DistanceSpec spec = inst.complex.kind() == ComplexKind::Alpha
                                    ? DistanceSpec::euclidean()
                                    : inst.distance;
      const DistanceMatrix dist = pairwise_distances(inst.cloud, spec);
      const FilteredComplex vr = build_vr(dist, 1);
      const SheafWeighting trivial = SheafWeighting::trivial(inst.cloud.size());
      for (double delta : options.deltas) {
        SweepOptions sweep;
        sweep.delta = delta;
        const auto records = psl_over_filtration(vr, inst.cloud, trivial, options.grid, 0, sweep);
        for (const auto& rec : records) {
          const std::size_t expected = persistent_betti0_unionfind(dist, rec.t, rec.t + delta);
          if (rec.summary.betti != expected) {
            fail("betti0 " + std::to_string(rec.summary.betti) + " != union-find " +
                 std::to_string(expected) + " t=" + fmt(rec.t) + " delta=" + fmt(delta));
          }
        }
      }
    }

    if (options.cochain) {
      const CochainCheck cc = cochain_check(inst.complex, inst.cloud, inst.weighting);
      if (!cc.pass()) fail("cochain residual " + fmt(cc.residual));
      const CompositionReport comp = check_composition(inst.cloud, inst.weighting, inst.complex);
      if (!comp.ok()) fail(std::to_string(comp.violations.size()) + " composition violations");
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace psheaf::oracle
