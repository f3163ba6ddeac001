#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "psheaf/filtration.hpp"
#include "psheaf/geometry.hpp"

namespace psheaf {

// Nowhere-zero function F on simplices that, together with per-vertex
// charges, defines every restriction scalar
//   S(face <= coface) = F(face) * prod(charges of coface \ face) / F(coface).
enum class FKind {
  ProductOfPairwiseDistances,  // F(vertex) = 1, F(s) = prod of edge lengths of s
  ConstantOne,                 // F = 1
};

std::string_view to_string(FKind kind);

struct SheafWeighting {
  std::vector<double> charges;  // one per cloud point
  FKind f_kind = FKind::ProductOfPairwiseDistances;

  static SheafWeighting from_cloud(const LabeledPointCloud& cloud,
                                   FKind kind = FKind::ProductOfPairwiseDistances);
  // All charges 1, F = 1: restriction scalars are all 1.
  static SheafWeighting trivial(std::size_t n);
};

double f_value(const Simplex& s, const LabeledPointCloud& cloud, const SheafWeighting& w);

// Throws NotAFace (any codimension allowed) or ZeroF.
double restriction_scalar(const Simplex& face, const Simplex& coface,
                          const LabeledPointCloud& cloud, const SheafWeighting& w);

// Weighted coboundary d^q restricted to a face-closed simplex subset.
struct CoboundaryMatrix {
  int q = 0;
  std::vector<std::size_t> rows;  // complex indices of (q+1)-simplices, canonical order
  std::vector<std::size_t> cols;  // complex indices of q-simplices, canonical order
  Eigen::SparseMatrix<double> entries;
};

// `subset` lists complex indices (any order); it must be face-closed.
CoboundaryMatrix coboundary_matrix(const FilteredComplex& fc,
                                   std::span<const std::size_t> subset, int q,
                                   const LabeledPointCloud& cloud, const SheafWeighting& w);

struct CompositionViolation {
  Simplex rho, sigma, tau;
  double direct = 0.0;    // S(rho <= tau)
  double composed = 0.0;  // S(sigma <= tau) * S(rho <= sigma)
};

struct CompositionReport {
  std::size_t chains_checked = 0;
  std::vector<CompositionViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks S(rho<=tau) == S(sigma<=tau) S(rho<=sigma) to 1e-12 * (1 + |lhs|)
// for every chain rho <= sigma <= tau inside the complex, including the
// identity cases rho == sigma and sigma == tau.
CompositionReport check_composition(const LabeledPointCloud& cloud, const SheafWeighting& w,
                                    const FilteredComplex& fc);

namespace testing {
// Flips the sign of the first stored entry of every coboundary the library
// assembles. Test-only; used to prove the oracle catches sign errors.
void set_coboundary_fault(bool enabled);
bool coboundary_fault_enabled();
}  // namespace testing

}  // namespace psheaf
