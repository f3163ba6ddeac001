#include "psheaf/psl.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/SparseCore>

#include "psheaf/errors.hpp"
#include "psheaf/parallel.hpp"

namespace psheaf {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s.maxCoeff() : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > 1e-10 * smax) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

void scatter(const PslOperator& op, bool up, bool down, Eigen::MatrixXd& out) {
  const auto n = static_cast<Eigen::Index>(op.size());
  out = Eigen::MatrixXd::Zero(n, n);
  for (const auto& b : op.blocks) {
    for (std::size_t i = 0; i < b.index.size(); ++i) {
      for (std::size_t j = 0; j < b.index.size(); ++j) {
        double v = 0.0;
        if (up) v += b.up(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (down) v += b.down(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        out(static_cast<Eigen::Index>(b.index[i]), static_cast<Eigen::Index>(b.index[j])) = v;
      }
    }
  }
}

}  // namespace

Eigen::MatrixXd PslOperator::up_part() const {
  Eigen::MatrixXd m;
  scatter(*this, true, false, m);
  return m;
}

Eigen::MatrixXd PslOperator::down_part() const {
  Eigen::MatrixXd m;
  scatter(*this, false, true, m);
  return m;
}

Eigen::MatrixXd PslOperator::matrix() const {
  Eigen::MatrixXd m;
  scatter(*this, true, true, m);
  return m;
}

Eigen::MatrixXd persistent_subspace_basis(const Eigen::MatrixXd& d_l,
                                          std::span<const bool> column_in_k) {
  if (static_cast<Eigen::Index>(column_in_k.size()) != d_l.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "column mask does not match coboundary");
  }
  std::vector<Eigen::Index> outside;
  for (std::size_t c = 0; c < column_in_k.size(); ++c) {
    if (!column_in_k[c]) outside.push_back(static_cast<Eigen::Index>(c));
  }
  // Constraint rows: components of D_L^T c on q-simplices of L \ K.
  Eigen::MatrixXd constraint(static_cast<Eigen::Index>(outside.size()), d_l.rows());
  for (std::size_t r = 0; r < outside.size(); ++r) {
    constraint.row(static_cast<Eigen::Index>(r)) = d_l.col(outside[r]).transpose();
  }
  return null_space(constraint);
}

Eigen::MatrixXd persistent_subspace_basis(const CoboundaryMatrix& d_l,
                                          std::span<const std::size_t> k_q_simplices) {
  std::vector<std::size_t> k_sorted(k_q_simplices.begin(), k_q_simplices.end());
  std::sort(k_sorted.begin(), k_sorted.end());
  std::unique_ptr<bool[]> mask(new bool[d_l.cols.size()]);
  for (std::size_t c = 0; c < d_l.cols.size(); ++c) {
    mask[c] = std::binary_search(k_sorted.begin(), k_sorted.end(), d_l.cols[c]);
  }
  return persistent_subspace_basis(Eigen::MatrixXd(d_l.entries),
                                   std::span<const bool>(mask.get(), d_l.cols.size()));
}

PslOperator assemble_psl(const FilteredComplex& fc, const SnapshotPair& pair, int q,
                         const LabeledPointCloud& cloud, const SheafWeighting& w) {
  if (q < 0 || q > 1) throw Error(ErrorCode::InvalidArgument, "only q in {0, 1} is supported");
  if (fc.max_dim() < q + 1) {
    throw Error(ErrorCode::DimensionMismatch, "complex must contain simplices up to dim q + 1");
  }
  if (fc.num_points() != cloud.size() || w.charges.size() != cloud.size()) {
    throw Error(ErrorCode::DimensionMismatch, "complex, cloud and weighting sizes differ");
  }
  if (pair.K.size() > pair.L.size()) {
    throw Error(ErrorCode::DimensionMismatch, "snapshot K is larger than L");
  }
  for (std::size_t idx : pair.L) {
    if (idx >= fc.size()) throw Error(ErrorCode::DimensionMismatch, "snapshot index out of range");
  }

  PslOperator op;
  op.q = q;
  op.snapshot = pair;

  std::vector<char> in_k(fc.size(), 0);
  for (std::size_t idx : pair.K) in_k[idx] = 1;
  for (std::size_t idx : pair.K) {
    if (!std::binary_search(pair.L.begin(), pair.L.end(), idx)) {
      throw Error(ErrorCode::DimensionMismatch, "snapshot K is not contained in L");
    }
  }

  const CoboundaryMatrix d_l = coboundary_matrix(fc, pair.L, q, cloud, w);
  for (std::size_t idx : d_l.cols) {
    if (in_k[idx]) op.basis.push_back(idx);
  }
  if (op.basis.empty()) return op;

  // Components of L's 1-skeleton; the operator is block diagonal over them.
  DisjointSets sets(cloud.size());
  for (std::size_t idx : pair.L) {
    const Simplex& s = fc[idx].simplex;
    if (s.dim() == 1) sets.unite(static_cast<std::size_t>(s[0]), static_cast<std::size_t>(s[1]));
  }
  auto component_of = [&](std::size_t idx) {
    return sets.find(static_cast<std::size_t>(fc[idx].simplex[0]));
  };

  std::vector<std::size_t> comp_ids;
  for (std::size_t idx : d_l.cols) comp_ids.push_back(component_of(idx));
  std::sort(comp_ids.begin(), comp_ids.end());
  comp_ids.erase(std::unique(comp_ids.begin(), comp_ids.end()), comp_ids.end());
  auto comp_slot = [&](std::size_t c) {
    return static_cast<std::size_t>(std::lower_bound(comp_ids.begin(), comp_ids.end(), c) -
                                    comp_ids.begin());
  };
  const std::size_t ncomp = comp_ids.size();

  // Local numbering of columns (q-simplices of L) and rows ((q+1)-simplices).
  std::vector<std::vector<std::size_t>> comp_cols(ncomp), comp_rows(ncomp);
  std::vector<std::size_t> col_slot(d_l.cols.size()), col_local(d_l.cols.size());
  for (std::size_t c = 0; c < d_l.cols.size(); ++c) {
    const std::size_t s = comp_slot(component_of(d_l.cols[c]));
    col_slot[c] = s;
    col_local[c] = comp_cols[s].size();
    comp_cols[s].push_back(c);
  }
  std::vector<std::size_t> row_local(d_l.rows.size());
  std::vector<std::size_t> row_slot(d_l.rows.size());
  for (std::size_t r = 0; r < d_l.rows.size(); ++r) {
    const std::size_t s = comp_slot(component_of(d_l.rows[r]));
    row_slot[r] = s;
    row_local[r] = comp_rows[s].size();
    comp_rows[s].push_back(r);
  }

  std::vector<Eigen::MatrixXd> local_d(ncomp);
  for (std::size_t s = 0; s < ncomp; ++s) {
    local_d[s] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(comp_rows[s].size()),
                                       static_cast<Eigen::Index>(comp_cols[s].size()));
  }
  for (Eigen::Index c = 0; c < d_l.entries.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(d_l.entries, c); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      const auto cc = static_cast<std::size_t>(c);
      if (row_slot[r] != col_slot[cc]) {
        throw Error(ErrorCode::Numerical, "coboundary couples distinct components");
      }
      local_d[row_slot[r]](static_cast<Eigen::Index>(row_local[r]),
                           static_cast<Eigen::Index>(col_local[cc])) = it.value();
    }
  }

  // Down part d^{q-1}_K (d^{q-1}_K)^T on K's q-simplices.
  Eigen::SparseMatrix<double> down_full;
  if (q >= 1) {
    const CoboundaryMatrix d_k = coboundary_matrix(fc, pair.K, q - 1, cloud, w);
    if (d_k.rows != op.basis) {
      throw Error(ErrorCode::DimensionMismatch, "down coboundary rows differ from basis");
    }
    down_full = d_k.entries * Eigen::SparseMatrix<double>(d_k.entries.transpose());
  }

  // Map basis position -> (slot, local column).
  std::vector<std::size_t> basis_pos_of_col(d_l.cols.size(), SIZE_MAX);
  for (std::size_t c = 0, b = 0; c < d_l.cols.size(); ++c) {
    if (in_k[d_l.cols[c]]) basis_pos_of_col[c] = b++;
  }

  for (std::size_t s = 0; s < ncomp; ++s) {
    std::vector<bool> col_in_k;
    std::vector<Eigen::Index> k_local;
    PslBlock block;
    for (std::size_t lc = 0; lc < comp_cols[s].size(); ++lc) {
      const std::size_t c = comp_cols[s][lc];
      const bool k = in_k[d_l.cols[c]] != 0;
      col_in_k.push_back(k);
      if (k) {
        k_local.push_back(static_cast<Eigen::Index>(lc));
        block.index.push_back(basis_pos_of_col[c]);
      }
    }
    if (block.index.empty()) continue;
    const Eigen::MatrixXd& d = local_d[s];
    Eigen::MatrixXd d_k_cols(d.rows(), static_cast<Eigen::Index>(k_local.size()));
    for (std::size_t j = 0; j < k_local.size(); ++j) {
      d_k_cols.col(static_cast<Eigen::Index>(j)) = d.col(k_local[j]);
    }
    const bool constrained = k_local.size() != col_in_k.size();
    if (constrained && d.rows() > 0) {
      std::unique_ptr<bool[]> mask(new bool[col_in_k.size()]);
      std::copy(col_in_k.begin(), col_in_k.end(), mask.get());
      const Eigen::MatrixXd z =
          persistent_subspace_basis(d, std::span<const bool>(mask.get(), col_in_k.size()));
      const Eigen::MatrixXd m = d_k_cols.transpose() * z;
      block.up = m * m.transpose();
    } else {
      block.up = d_k_cols.transpose() * d_k_cols;
    }
    const auto nb = static_cast<Eigen::Index>(block.index.size());
    block.down = Eigen::MatrixXd::Zero(nb, nb);
    if (q >= 1) {
      for (Eigen::Index i = 0; i < nb; ++i) {
        for (Eigen::Index j = 0; j < nb; ++j) {
          block.down(i, j) = down_full.coeff(static_cast<Eigen::Index>(block.index[i]),
                                             static_cast<Eigen::Index>(block.index[j]));
        }
      }
    }
    op.blocks.push_back(std::move(block));
  }
  // Down-part couplings must stay inside blocks.
  if (q >= 1) {
    std::vector<std::size_t> block_of(op.size());
    for (std::size_t b = 0; b < op.blocks.size(); ++b) {
      for (std::size_t i : op.blocks[b].index) block_of[i] = b;
    }
    for (Eigen::Index c = 0; c < down_full.outerSize(); ++c) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(down_full, c); it; ++it) {
        if (it.value() != 0.0 && block_of[static_cast<std::size_t>(it.row())] !=
                                     block_of[static_cast<std::size_t>(c)]) {
          throw Error(ErrorCode::Numerical, "down Laplacian couples distinct components");
        }
      }
    }
  }
  return op;
}

SpectrumStats SpectrumStats::of(std::span<const double> values) {
  SpectrumStats s;
  if (values.empty()) return s;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  s.count = n;
  s.min = v.front();
  s.max = v.back();
  s.sum = std::accumulate(v.begin(), v.end(), 0.0);
  s.mean = s.sum / n;
  const std::size_t mid = v.size() / 2;
  s.median = (v.size() % 2 == 1) ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.var = ss / n;
  s.std = std::sqrt(s.var);
  return s;
}

SpectrumSummary summarize_eigenvalues(std::vector<double> eigenvalues, SpectrumTolerance tol) {
  SpectrumSummary out;
  std::sort(eigenvalues.begin(), eigenvalues.end());
  out.empty = eigenvalues.empty();
  const double lmax = eigenvalues.empty() ? 0.0 : eigenvalues.back();
  out.zero_tolerance_used = tol.abs + tol.rel * std::max(lmax, 1.0);
  for (double lambda : eigenvalues) {
    if (lambda <= out.zero_tolerance_used) {
      ++out.betti;
    } else {
      out.nonzero_eigs.push_back(lambda);
    }
  }
  if (!out.nonzero_eigs.empty()) out.lambda_min_nonzero = out.nonzero_eigs.front();
  out.stats = SpectrumStats::of(out.nonzero_eigs);
  out.eigenvalues = std::move(eigenvalues);
  return out;
}

SpectrumSummary spectrum(const PslOperator& op, SpectrumTolerance tol) {
  std::vector<double> eigs;
  eigs.reserve(op.size());
  for (const auto& b : op.blocks) {
    const Eigen::MatrixXd m = b.up + b.down;
    const double asym = m.size() ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > 1e-9) {
      std::ostringstream msg;
      msg << "operator block is not symmetric (max asymmetry " << asym << ")";
      throw Error(ErrorCode::NonSymmetric, msg.str());
    }
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::Numerical, "symmetric eigensolver did not converge");
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      eigs.push_back(solver.eigenvalues()[i]);
    }
  }
  return summarize_eigenvalues(std::move(eigs), tol);
}

std::vector<SweepRecord> psl_over_filtration(const FilteredComplex& fc,
                                             const LabeledPointCloud& cloud,
                                             const SheafWeighting& w,
                                             std::span<const double> grid, int q,
                                             const SweepOptions& options) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "filtration grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "filtration grid must be strictly ascending");
    }
  }
  if (!(options.delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be >= 0");
  return parallel_map<SweepRecord>(grid.size(), options.threads, [&](std::size_t i) {
    const SnapshotPair pair = snapshot_pair(fc, grid[i], options.delta);
    const PslOperator op = assemble_psl(fc, pair, q, cloud, w);
    return SweepRecord{grid[i], spectrum(op, options.tol)};
  });
}

}  // namespace psheaf
