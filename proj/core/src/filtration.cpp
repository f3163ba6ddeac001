#include "psheaf/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "psheaf/errors.hpp"

namespace psheaf {

Simplex::Simplex(std::initializer_list<int> vertices)
    : Simplex(std::span<const int>(vertices.begin(), vertices.size())) {}

Simplex::Simplex(std::span<const int> vertices) {
  if (vertices.empty() || vertices.size() > kMaxVertices) {
    throw Error(ErrorCode::InvalidArgument, "simplex must have 1 to 4 vertices");
  }
  size_ = static_cast<std::uint8_t>(vertices.size());
  std::copy(vertices.begin(), vertices.end(), v_.begin());
  std::sort(v_.begin(), v_.begin() + size_);
  for (std::size_t k = 0; k < size_; ++k) {
    if (v_[k] < 0) throw Error(ErrorCode::InvalidArgument, "negative vertex index");
    if (k > 0 && v_[k] == v_[k - 1]) {
      throw Error(ErrorCode::InvalidArgument, "repeated vertex in simplex");
    }
  }
}

bool Simplex::contains(int vertex) const {
  return std::binary_search(v_.begin(), v_.begin() + size_, vertex);
}

bool Simplex::is_face_of(const Simplex& other) const {
  if (size_ == 0 || size_ > other.size_) return false;
  return std::includes(other.v_.begin(), other.v_.begin() + other.size_, v_.begin(),
                       v_.begin() + size_);
}

Simplex Simplex::drop(std::size_t k) const {
  std::array<int, kMaxVertices> rest{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < size_; ++i) {
    if (i != k) rest[n++] = v_[i];
  }
  return Simplex(std::span<const int>(rest.data(), n));
}

std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  for (std::size_t k = 0; k < a.size_; ++k) {
    if (auto c = a.v_[k] <=> b.v_[k]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
  std::size_t h = s.size();
  for (int v : s.vertices()) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::ostream& operator<<(std::ostream& os, const Simplex& s) {
  os << '{';
  for (std::size_t k = 0; k < s.size(); ++k) os << (k ? "," : "") << s[k];
  return os << '}';
}

FilteredComplex::FilteredComplex(std::vector<FilteredSimplex> simplices, ComplexKind kind,
                                 int max_dim, std::size_t num_points)
    : simplices_(std::move(simplices)), kind_(kind), max_dim_(max_dim),
      num_points_(num_points) {
  std::sort(simplices_.begin(), simplices_.end(),
            [](const FilteredSimplex& a, const FilteredSimplex& b) {
              if (a.value != b.value) return a.value < b.value;
              return a.simplex < b.simplex;
            });
  index_.reserve(simplices_.size());
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    if (simplices_[i].simplex.dim() > max_dim_) {
      throw Error(ErrorCode::InvalidArgument, "simplex exceeds max_dim");
    }
    if (!index_.emplace(simplices_[i].simplex, i).second) {
      std::ostringstream msg;
      msg << "duplicate simplex " << simplices_[i].simplex;
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
  }
  validate_complex(*this);
}

std::ptrdiff_t FilteredComplex::find(const Simplex& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::size_t FilteredComplex::count_of_dim(int dim) const {
  return static_cast<std::size_t>(
      std::count_if(simplices_.begin(), simplices_.end(),
                    [dim](const FilteredSimplex& s) { return s.simplex.dim() == dim; }));
}

double FilteredComplex::max_value() const {
  return simplices_.empty() ? 0.0 : simplices_.back().value;
}

void validate_complex(const FilteredComplex& fc) {
  for (const auto& fs : fc.simplices()) {
    const Simplex& s = fs.simplex;
    if (!(fs.value >= 0.0) || !std::isfinite(fs.value)) {
      std::ostringstream msg;
      msg << "simplex " << s << " has invalid filtration value " << fs.value;
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    if (s.dim() == 0) {
      if (fs.value != 0.0) {
        throw Error(ErrorCode::InvalidArgument, "vertex with nonzero filtration value");
      }
      if (static_cast<std::size_t>(s[0]) >= fc.num_points()) {
        throw Error(ErrorCode::InvalidArgument, "vertex index out of range");
      }
      continue;
    }
    for (std::size_t k = 0; k < s.size(); ++k) {
      const Simplex face = s.drop(k);
      const auto idx = fc.find(face);
      if (idx < 0) {
        std::ostringstream msg;
        msg << "face " << face << " of " << s << " is missing";
        throw Error(ErrorCode::InvalidArgument, msg.str());
      }
      if (fc[static_cast<std::size_t>(idx)].value > fs.value) {
        std::ostringstream msg;
        msg << "face " << face << " enters after its coface " << s;
        throw Error(ErrorCode::InvalidArgument, msg.str());
      }
    }
  }
}

FilteredComplex build_vr(const DistanceMatrix& dist, int max_dim, double max_scale) {
  const auto n = dist.rows();
  if (dist.cols() != n) throw Error(ErrorCode::InvalidArgument, "distance matrix not square");
  if (max_dim < 0 || max_dim > 2) {
    throw Error(ErrorCode::InvalidArgument, "VR max_dim must be in [0, 2]");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) throw Error(ErrorCode::InvalidArgument, "nonzero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (dist(i, j) != dist(j, i) || std::isnan(dist(i, j))) {
        throw Error(ErrorCode::InvalidArgument, "distance matrix not symmetric");
      }
    }
  }

  std::vector<FilteredSimplex> out;
  for (int i = 0; i < n; ++i) out.push_back({Simplex{i}, 0.0});
  if (max_dim >= 1) {
    std::vector<std::vector<int>> upper(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double d = dist(i, j);
        if (std::isfinite(d) && d <= max_scale) {
          out.push_back({Simplex{i, j}, d});
          upper[i].push_back(j);
        }
      }
    }
    if (max_dim >= 2) {
      for (int i = 0; i < n; ++i) {
        const auto& ni = upper[i];
        for (std::size_t a = 0; a < ni.size(); ++a) {
          const int j = ni[a];
          const auto& nj = upper[j];
          for (std::size_t b = a + 1; b < ni.size(); ++b) {
            const int k = ni[b];
            if (!std::binary_search(nj.begin(), nj.end(), k)) continue;
            const double value = std::max({dist(i, j), dist(i, k), dist(j, k)});
            out.push_back({Simplex{i, j, k}, value});
          }
        }
      }
    }
  }
  return FilteredComplex(std::move(out), ComplexKind::VietorisRips, max_dim,
                         static_cast<std::size_t>(n));
}

SnapshotPair snapshot_pair(const FilteredComplex& fc, double t, double delta) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be >= 0");
  SnapshotPair pair;
  pair.t_small = t;
  pair.t_large = t + delta;
  for (std::size_t i = 0; i < fc.size(); ++i) {
    const double v = fc[i].value;
    if (v <= pair.t_small) pair.K.push_back(i);
    if (v <= pair.t_large) pair.L.push_back(i);
  }
  return pair;
}

int signed_incidence(const Simplex& face, const Simplex& coface) {
  if (face.size() + 1 != coface.size() || !face.is_face_of(coface)) {
    std::ostringstream msg;
    msg << face << " is not a codimension-1 face of " << coface;
    throw Error(ErrorCode::NotAFace, msg.str());
  }
  for (std::size_t k = 0; k < coface.size(); ++k) {
    if (!face.contains(coface[k])) return (k % 2 == 0) ? 1 : -1;
  }
  throw Error(ErrorCode::NotAFace, "face relation failed");
}

std::vector<std::vector<int>> integer_boundary_matrix(const FilteredComplex& fc, int q) {
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < fc.size(); ++i) {
    const int d = fc[i].simplex.dim();
    if (d == q - 1) rows.push_back(i);
    if (d == q) cols.push_back(i);
  }
  std::unordered_map<std::size_t, std::size_t> row_of;
  for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;
  std::vector<std::vector<int>> b(rows.size(), std::vector<int>(cols.size(), 0));
  if (q <= 0) return b;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Simplex& s = fc[cols[c]].simplex;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const Simplex face = s.drop(k);
      const auto idx = static_cast<std::size_t>(fc.find(face));
      b[row_of.at(idx)][c] = signed_incidence(face, s);
    }
  }
  return b;
}

void write_complex(std::ostream& os, const FilteredComplex& fc) {
  std::ostringstream line;
  line << std::setprecision(17);
  for (const auto& fs : fc.simplices()) {
    line.str("");
    line << fs.simplex.dim();
    for (int v : fs.simplex.vertices()) line << ' ' << v;
    line << ' ' << fs.value << '\n';
    os << line.str();
  }
}

}  // namespace psheaf
