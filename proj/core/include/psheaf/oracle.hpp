#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psheaf/filtration.hpp"
#include "psheaf/geometry.hpp"
#include "psheaf/psl.hpp"
#include "psheaf/sheaf.hpp"

namespace psheaf::oracle {

// Brute-force persistent sheaf Laplacian: dense coboundaries assembled from
// first principles, the persistence subspace from a full LAPACK SVD, no
// block decomposition. Shares only Simplex/FilteredComplex with the engine.
// Throws InstanceTooLarge when L holds more than `max_simplices` simplices.
PslOperator dense_psl(const FilteredComplex& fc, const SnapshotPair& pair, int q,
                      const LabeledPointCloud& cloud, const SheafWeighting& w,
                      std::size_t max_simplices = 500);

// Ascending eigenvalues of a symmetric matrix via LAPACK dsyev.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m);

// Number of connected components of the graph whose edges have finite
// length <= t_plus_delta: persistent beta_0 of K(t) -> L(t + delta) when
// every vertex is born at 0. `shuffle_seed` permutes the edge processing
// order.
std::size_t persistent_betti0_unionfind(const DistanceMatrix& dist, double t,
                                        double t_plus_delta,
                                        std::optional<std::uint64_t> shuffle_seed = {});

struct SpectrumComparison {
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;  // max_abs_err / max(|lambda|), or max_abs_err if all zero
  bool same_size = true;
  bool pass(double rel_tol) const;
};

SpectrumComparison compare_spectra(std::span<const double> engine,
                                   std::span<const double> oracle);

struct OracleReport {
  std::string instance;
  std::vector<double> engine;  // worst-case spectrum from the engine
  std::vector<double> oracle;  // matching oracle spectrum
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  bool pass = true;
  std::vector<std::string> failures;
};

std::string to_json(const OracleReport& report);

// Randomized instance used by the verification battery.
struct RandomInstance {
  std::string descriptor;
  LabeledPointCloud cloud;
  DistanceSpec distance;
  FilteredComplex complex;
  SheafWeighting weighting;
};

// 4..12 points in a 7 A box; complex kind, distance and charge pattern vary
// with the trial index. Deterministic in (seed, trial).
RandomInstance make_random_instance(std::uint64_t seed, std::size_t trial);

struct CochainCheck {
  double residual = 0.0;  // max |(d^1 d^0)_ij|
  double scale = 1.0;     // 1 + |d^1|_max * |d^0|_max
  bool pass() const { return residual <= 1e-12 * scale; }
};

// d^1 * d^0 over the whole complex, using the engine's assembly.
CochainCheck cochain_check(const FilteredComplex& fc, const LabeledPointCloud& cloud,
                           const SheafWeighting& w);

struct VerifyOptions {
  std::size_t trials = 50;
  std::uint64_t seed = 7;
  std::vector<double> grid{3, 4, 5, 6, 7, 8, 9};
  std::vector<double> deltas{0.0, 0.5, 1.0};
  double rel_tol = 1e-8;
  bool oracle_spectra = true;  // engine vs dense_psl, PSD, symmetry
  bool unionfind = true;       // trivial-sheaf beta_0 vs union-find
  bool cochain = true;         // cochain property and composition
};

// Engine-vs-oracle spectra, PSD/symmetry and cochain checks, plus the
// union-find beta_0 check on trivial-sheaf VR copies, one report per trial.
std::vector<OracleReport> run_verification(const VerifyOptions& options);

}  // namespace psheaf::oracle
