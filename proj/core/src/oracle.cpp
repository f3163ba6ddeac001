#include "psheaf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <lapacke.h>

#include "json.hpp"
#include "psheaf/errors.hpp"

namespace psheaf::oracle {

namespace {

// Row-major dense matrix; kept separate from Eigen on purpose.
struct Dense {
  int rows = 0, cols = 0;
  std::vector<double> a;
  Dense(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

Dense multiply_transposed(const Dense& x, const Dense& y) {  // x * y^T
  Dense out(x.rows, y.rows);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < y.rows; ++j) {
      double s = 0.0;
      for (int k = 0; k < x.cols; ++k) s += x(i, k) * y(j, k);
      out(i, j) = s;
    }
  }
  return out;
}

double raw_distance(const LabeledPointCloud& cloud, int i, int j) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = cloud.coords(static_cast<std::size_t>(i))[k] -
                     cloud.coords(static_cast<std::size_t>(j))[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double oracle_f(const std::vector<int>& verts, const LabeledPointCloud& cloud,
                const SheafWeighting& w) {
  if (w.f_kind == FKind::ConstantOne) return 1.0;
  double f = 1.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) f *= raw_distance(cloud, verts[i], verts[j]);
  }
  return f;
}

// Entry of d^q for face = coface minus the vertex at position k.
double oracle_entry(const Simplex& coface, std::size_t k, const LabeledPointCloud& cloud,
                    const SheafWeighting& w) {
  std::vector<int> all(coface.vertices().begin(), coface.vertices().end());
  std::vector<int> face;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i != k) face.push_back(all[i]);
  }
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double q_missing = w.charges[static_cast<std::size_t>(all[k])];
  return sign * oracle_f(face, cloud, w) * q_missing / oracle_f(all, cloud, w);
}

std::vector<double> svd_values_and_vt(Dense a, Dense& vt) {
  const int m = a.rows, n = a.cols;
  std::vector<double> s(static_cast<std::size_t>(std::min(m, n)));
  std::vector<double> superb(static_cast<std::size_t>(std::max(1, std::min(m, n))));
  vt = Dense(n, n);
  double dummy_u = 0.0;
  const int info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'N', 'A', m, n, a.a.data(), n, s.data(),
                                  &dummy_u, 1, vt.a.data(), n, superb.data());
  if (info != 0) throw Error(ErrorCode::Numerical, "LAPACK dgesvd failed");
  return s;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t root(std::size_t x) {
    std::size_t r = x;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[x] != r) {
      const std::size_t next = parent_[x];
      parent_[x] = r;
      x = next;
    }
    return r;
  }
  void merge(std::size_t a, std::size_t b) {
    a = root(a);
    b = root(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
  }
  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_, size_;
  std::size_t components_;
};

}  // namespace

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return {};
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = m(i, j);
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  const int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', n, a.data(), n, eig.data());
  if (info != 0) throw Error(ErrorCode::Numerical, "LAPACK dsyev failed");
  return eig;
}

PslOperator dense_psl(const FilteredComplex& fc, const SnapshotPair& pair, int q,
                      const LabeledPointCloud& cloud, const SheafWeighting& w,
                      std::size_t max_simplices) {
  if (pair.L.size() > max_simplices) {
    throw Error(ErrorCode::InstanceTooLarge,
                "oracle instance has " + std::to_string(pair.L.size()) + " simplices");
  }
  std::vector<char> in_k(fc.size(), 0);
  for (std::size_t i : pair.K) in_k[i] = 1;

  std::vector<std::size_t> l_q, l_q1, k_q, k_qm1;
  for (std::size_t i : pair.L) {
    const int d = fc[i].simplex.dim();
    if (d == q) l_q.push_back(i);
    if (d == q + 1) l_q1.push_back(i);
    if (in_k[i] && d == q) k_q.push_back(i);
    if (in_k[i] && d == q - 1) k_qm1.push_back(i);
  }
  std::sort(l_q.begin(), l_q.end());
  std::sort(l_q1.begin(), l_q1.end());
  std::sort(k_q.begin(), k_q.end());
  std::sort(k_qm1.begin(), k_qm1.end());
  std::map<std::size_t, int> pos_l_q, pos_k_qm1;
  for (std::size_t i = 0; i < l_q.size(); ++i) pos_l_q[l_q[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < k_qm1.size(); ++i) pos_k_qm1[k_qm1[i]] = static_cast<int>(i);

  // Full coboundary d^q over L.
  Dense d(static_cast<int>(l_q1.size()), static_cast<int>(l_q.size()));
  for (std::size_t r = 0; r < l_q1.size(); ++r) {
    const Simplex& tau = fc[l_q1[r]].simplex;
    for (std::size_t k = 0; k < tau.size(); ++k) {
      const auto face = static_cast<std::size_t>(fc.find(tau.drop(k)));
      d(static_cast<int>(r), pos_l_q.at(face)) = oracle_entry(tau, k, cloud, w);
    }
  }

  // Persistence subspace: null space of the adjoint rows of L \ K.
  std::vector<int> outside, inside;
  for (std::size_t c = 0; c < l_q.size(); ++c) {
    (in_k[l_q[c]] ? inside : outside).push_back(static_cast<int>(c));
  }
  const int n_up = d.rows;
  Dense z(n_up, n_up);
  int z_cols = n_up;
  if (!outside.empty() && n_up > 0) {
    Dense a(static_cast<int>(outside.size()), n_up);
    for (std::size_t r = 0; r < outside.size(); ++r) {
      for (int c = 0; c < n_up; ++c) a(static_cast<int>(r), c) = d(c, outside[r]);
    }
    Dense vt(0, 0);
    const auto s = svd_values_and_vt(a, vt);
    const double smax = s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
    int rank = 0;
    for (double v : s) {
      if (v > 1e-10 * smax) ++rank;
    }
    z_cols = n_up - rank;
    z = Dense(n_up, z_cols);
    for (int j = 0; j < z_cols; ++j) {
      for (int i = 0; i < n_up; ++i) z(i, j) = vt(rank + j, i);
    }
  } else {
    for (int i = 0; i < n_up; ++i) z(i, i) = 1.0;
  }

  // M = (columns of d for K's q-simplices)^T * Z, up = M M^T.
  const int nk = static_cast<int>(inside.size());
  Dense m(nk, z_cols);
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < z_cols; ++j) {
      double s = 0.0;
      for (int r = 0; r < n_up; ++r) s += d(r, inside[static_cast<std::size_t>(i)]) * z(r, j);
      m(i, j) = s;
    }
  }
  const Dense up = multiply_transposed(m, m);

  Dense down(nk, nk);
  if (q >= 1) {
    Dense dk(nk, static_cast<int>(k_qm1.size()));
    for (int i = 0; i < nk; ++i) {
      const Simplex& sigma = fc[k_q[static_cast<std::size_t>(i)]].simplex;
      for (std::size_t k = 0; k < sigma.size(); ++k) {
        const auto face = static_cast<std::size_t>(fc.find(sigma.drop(k)));
        dk(i, pos_k_qm1.at(face)) = oracle_entry(sigma, k, cloud, w);
      }
    }
    down = multiply_transposed(dk, dk);
  }

  PslOperator op;
  op.q = q;
  op.snapshot = pair;
  op.basis = k_q;
  if (nk > 0) {
    PslBlock block;
    block.index.resize(static_cast<std::size_t>(nk));
    std::iota(block.index.begin(), block.index.end(), 0);
    block.up.resize(nk, nk);
    block.down.resize(nk, nk);
    for (int i = 0; i < nk; ++i) {
      for (int j = 0; j < nk; ++j) {
        block.up(i, j) = up(i, j);
        block.down(i, j) = down(i, j);
      }
    }
    op.blocks.push_back(std::move(block));
  }
  return op;
}

std::size_t persistent_betti0_unionfind(const DistanceMatrix& dist, double t,
                                        double t_plus_delta,
                                        std::optional<std::uint64_t> shuffle_seed) {
  if (t_plus_delta < t) throw Error(ErrorCode::InvalidArgument, "t + delta must be >= t");
  const auto n = static_cast<std::size_t>(dist.rows());
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::isfinite(d) && d <= t_plus_delta) edges.emplace_back(i, j);
    }
  }
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    for (std::size_t i = edges.size(); i > 1; --i) {
      std::swap(edges[i - 1], edges[static_cast<std::size_t>(rng() % i)]);
    }
  }
  UnionFind uf(n);
  for (const auto& [a, b] : edges) uf.merge(a, b);
  return uf.components();
}

bool SpectrumComparison::pass(double rel_tol) const {
  return same_size && max_rel_err <= rel_tol;
}

SpectrumComparison compare_spectra(std::span<const double> engine,
                                   std::span<const double> oracle) {
  SpectrumComparison c;
  if (engine.size() != oracle.size()) {
    c.same_size = false;
    c.max_abs_err = c.max_rel_err = std::numeric_limits<double>::infinity();
    return c;
  }
  std::vector<double> a(engine.begin(), engine.end()), b(oracle.begin(), oracle.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.max_abs_err = std::max(c.max_abs_err, std::abs(a[i] - b[i]));
    scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  }
  c.max_rel_err = scale > 0.0 ? c.max_abs_err / scale : c.max_abs_err;
  return c;
}

std::string to_json(const OracleReport& report) {
  nlohmann::ordered_json j;
  j["instance"] = report.instance;
  j["pass"] = report.pass;
  j["max_abs_err"] = report.max_abs_err;
  j["max_rel_err"] = report.max_rel_err;
  j["engine"] = report.engine;
  j["oracle"] = report.oracle;
  j["failures"] = report.failures;
  return j.dump();
}

}  // namespace psheaf::oracle
