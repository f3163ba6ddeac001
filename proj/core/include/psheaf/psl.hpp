#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "psheaf/filtration.hpp"
#include "psheaf/geometry.hpp"
#include "psheaf/sheaf.hpp"

namespace psheaf {

// Diagonal block of a persistent sheaf Laplacian. `index` holds positions
// into PslOperator::basis; the operator is zero outside its blocks.
struct PslBlock {
  std::vector<std::size_t> index;
  Eigen::MatrixXd up;
  Eigen::MatrixXd down;
};

// Persistent sheaf Laplacian of degree q for a snapshot pair K <= L, acting
// on the q-cochains of K. Stored block-diagonally (one block per connected
// component of L); dense views are assembled on request.
struct PslOperator {
  int q = 0;
  SnapshotPair snapshot;
  std::vector<std::size_t> basis;  // complex indices of the q-simplices of K
  std::vector<PslBlock> blocks;

  std::size_t size() const { return basis.size(); }
  Eigen::MatrixXd up_part() const;
  Eigen::MatrixXd down_part() const;
  Eigen::MatrixXd matrix() const;
};

// Orthonormal basis (columns) of {c in C^{q+1}(L) : (D_L^T c) vanishes on the
// q-simplices of L outside K}. Identity when that constraint set is empty.
// Null space via SVD with singular-value cutoff 1e-10 * sigma_max.
Eigen::MatrixXd persistent_subspace_basis(const CoboundaryMatrix& d_l,
                                          std::span<const std::size_t> k_q_simplices);
Eigen::MatrixXd persistent_subspace_basis(const Eigen::MatrixXd& d_l,
                                          std::span<const bool> column_in_k);

PslOperator assemble_psl(const FilteredComplex& fc, const SnapshotPair& pair, int q,
                         const LabeledPointCloud& cloud, const SheafWeighting& w);

// Statistics of the nonzero spectrum, in feature order.
struct SpectrumStats {
  double max = 0.0, min = 0.0, mean = 0.0, median = 0.0, sum = 0.0, std = 0.0, var = 0.0;
  double count = 0.0;

  static constexpr std::size_t kSize = 8;
  static constexpr std::array<std::string_view, kSize> kNames = {
      "max", "min", "mean", "median", "sum", "std", "var", "count"};
  std::array<double, kSize> as_array() const {
    return {max, min, mean, median, sum, std, var, count};
  }
  // Population moments; all zero for an empty input.
  static SpectrumStats of(std::span<const double> values);
};

struct SpectrumSummary {
  std::size_t betti = 0;
  std::vector<double> nonzero_eigs;  // ascending
  std::optional<double> lambda_min_nonzero;
  SpectrumStats stats;
  double zero_tolerance_used = 0.0;  // eigenvalues <= this are harmonic
  bool empty = false;                // no q-simplices in K
  std::vector<double> eigenvalues;   // full spectrum, ascending
};

struct SpectrumTolerance {
  double rel = 1e-8;
  double abs = 1e-12;
};

// Zero rule: lambda <= abs + rel * max(lambda_max, 1). Throws NonSymmetric if
// any block departs from symmetry by more than 1e-9.
SpectrumSummary spectrum(const PslOperator& op, SpectrumTolerance tol = {});

// Builds a summary from an already computed spectrum (any order).
SpectrumSummary summarize_eigenvalues(std::vector<double> eigenvalues, SpectrumTolerance tol = {});

struct SweepRecord {
  double t = 0.0;
  SpectrumSummary summary;
};

struct SweepOptions {
  double delta = 0.0;
  SpectrumTolerance tol;
  std::size_t threads = 1;  // 0 = hardware concurrency
};

std::vector<SweepRecord> psl_over_filtration(const FilteredComplex& fc,
                                             const LabeledPointCloud& cloud,
                                             const SheafWeighting& w,
                                             std::span<const double> grid, int q,
                                             const SweepOptions& options = {});

// JSON document {q, delta, grid, records:[{t, betti, lambda_min, stats, empty}], meta}.
struct SweepDocument {
  int q = 0;
  double delta = 0.0;
  std::vector<double> grid;
  std::vector<SweepRecord> records;
  std::vector<std::pair<std::string, std::string>> meta;
};
std::string to_json(const SweepDocument& doc, int indent = -1);

// CSV rows "t,betti,lambda_min" with an empty lambda_min when absent.
std::string to_plot_csv(std::span<const SweepRecord> records);

}  // namespace psheaf
