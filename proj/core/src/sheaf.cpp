#include "psheaf/sheaf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "psheaf/errors.hpp"

namespace psheaf {

namespace {
std::atomic<bool> g_coboundary_fault{false};
}  // namespace

namespace testing {
void set_coboundary_fault(bool enabled) { g_coboundary_fault.store(enabled); }
bool coboundary_fault_enabled() { return g_coboundary_fault.load(); }
}  // namespace testing

std::string_view to_string(FKind kind) {
  switch (kind) {
    case FKind::ProductOfPairwiseDistances: return "product_of_pairwise_distances";
    case FKind::ConstantOne: return "constant_one";
  }
  return "unknown";
}

SheafWeighting SheafWeighting::from_cloud(const LabeledPointCloud& cloud, FKind kind) {
  return {cloud.charges(), kind};
}

SheafWeighting SheafWeighting::trivial(std::size_t n) {
  return {std::vector<double>(n, 1.0), FKind::ConstantOne};
}

double f_value(const Simplex& s, const LabeledPointCloud& cloud, const SheafWeighting& w) {
  if (w.f_kind == FKind::ConstantOne) return 1.0;
  double f = 1.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      f *= euclidean_distance(cloud.coords(s[i]), cloud.coords(s[j]));
    }
  }
  return f;
}

double restriction_scalar(const Simplex& face, const Simplex& coface,
                          const LabeledPointCloud& cloud, const SheafWeighting& w) {
  if (!face.is_face_of(coface)) {
    std::ostringstream msg;
    msg << face << " is not a face of " << coface;
    throw Error(ErrorCode::NotAFace, msg.str());
  }
  for (int v : coface.vertices()) {
    if (v < 0 || static_cast<std::size_t>(v) >= cloud.size() ||
        static_cast<std::size_t>(v) >= w.charges.size()) {
      throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(v) + " is outside the cloud");
    }
  }
  if (face == coface) return 1.0;
  const double f_coface = f_value(coface, cloud, w);
  if (f_coface == 0.0) {
    std::ostringstream msg;
    msg << "F vanishes on " << coface;
    throw Error(ErrorCode::ZeroF, msg.str());
  }
  double numerator = f_value(face, cloud, w);
  for (int v : coface.vertices()) {
    if (!face.contains(v)) numerator *= w.charges.at(static_cast<std::size_t>(v));
  }
  return numerator / f_coface;
}

CoboundaryMatrix coboundary_matrix(const FilteredComplex& fc,
                                   std::span<const std::size_t> subset, int q,
                                   const LabeledPointCloud& cloud, const SheafWeighting& w) {
  if (q < 0) throw Error(ErrorCode::InvalidArgument, "coboundary degree must be >= 0");
  if (w.charges.size() != cloud.size() || fc.num_points() != cloud.size()) {
    throw Error(ErrorCode::DimensionMismatch, "weighting, cloud and complex sizes differ");
  }
  CoboundaryMatrix d;
  d.q = q;
  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t idx : sorted) {
    const int dim = fc[idx].simplex.dim();
    if (dim == q) d.cols.push_back(idx);
    if (dim == q + 1) d.rows.push_back(idx);
  }
  std::unordered_map<std::size_t, Eigen::Index> col_of;
  col_of.reserve(d.cols.size());
  for (std::size_t c = 0; c < d.cols.size(); ++c) col_of.emplace(d.cols[c], static_cast<Eigen::Index>(c));

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(d.rows.size() * static_cast<std::size_t>(q + 2));
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    const Simplex& tau = fc[d.rows[r]].simplex;
    for (std::size_t k = 0; k < tau.size(); ++k) {
      const Simplex sigma = tau.drop(k);
      const auto face_idx = fc.find(sigma);
      auto it = face_idx < 0 ? col_of.end() : col_of.find(static_cast<std::size_t>(face_idx));
      if (it == col_of.end()) {
        std::ostringstream msg;
        msg << "simplex subset is not face-closed: " << sigma << " missing under " << tau;
        throw Error(ErrorCode::InvalidArgument, msg.str());
      }
      const double value =
          signed_incidence(sigma, tau) * restriction_scalar(sigma, tau, cloud, w);
      triplets.emplace_back(static_cast<Eigen::Index>(r), it->second, value);
    }
  }
  d.entries.resize(static_cast<Eigen::Index>(d.rows.size()),
                   static_cast<Eigen::Index>(d.cols.size()));
  d.entries.setFromTriplets(triplets.begin(), triplets.end());
  d.entries.makeCompressed();
  if (testing::coboundary_fault_enabled() && d.entries.nonZeros() > 0) {
    d.entries.valuePtr()[0] = -d.entries.valuePtr()[0];
  }
  return d;
}

CompositionReport check_composition(const LabeledPointCloud& cloud, const SheafWeighting& w,
                                    const FilteredComplex& fc) {
  CompositionReport report;
  auto faces_of = [](const Simplex& s) {
    std::vector<Simplex> out;
    const int n = static_cast<int>(s.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> verts;
      for (int k = 0; k < n; ++k) {
        if (mask & (1 << k)) verts.push_back(s[static_cast<std::size_t>(k)]);
      }
      out.emplace_back(std::span<const int>(verts));
    }
    return out;
  };
  for (const auto& fs : fc.simplices()) {
    const Simplex& tau = fs.simplex;
    for (const Simplex& sigma : faces_of(tau)) {
      for (const Simplex& rho : faces_of(sigma)) {
        const double direct = restriction_scalar(rho, tau, cloud, w);
        const double composed = restriction_scalar(sigma, tau, cloud, w) *
                                restriction_scalar(rho, sigma, cloud, w);
        ++report.chains_checked;
        if (std::abs(direct - composed) > 1e-12 * (1.0 + std::abs(direct))) {
          report.violations.push_back({rho, sigma, tau, direct, composed});
        }
      }
    }
  }
  return report;
}

}  // namespace psheaf
