#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "psheaf/geometry.hpp"

namespace psheaf {

// Simplex of dimension <= 3 over point positions, vertices strictly ascending.
class Simplex {
 public:
  static constexpr int kMaxVertices = 4;

  Simplex() = default;
  // Sorts the vertices; throws InvalidArgument on repeats or > 4 vertices.
  Simplex(std::initializer_list<int> vertices);
  explicit Simplex(std::span<const int> vertices);

  int dim() const { return static_cast<int>(size_) - 1; }
  std::size_t size() const { return size_; }
  int operator[](std::size_t k) const { return v_[k]; }
  std::span<const int> vertices() const { return {v_.data(), size_}; }
  bool contains(int vertex) const;
  bool is_face_of(const Simplex& other) const;  // any codimension, includes equality

  // Codimension-1 face obtained by dropping vertex position k.
  Simplex drop(std::size_t k) const;

  friend bool operator==(const Simplex& a, const Simplex& b) {
    return a.size_ == b.size_ && a.v_ == b.v_;
  }
  // Lexicographic on (dim, vertices).
  friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b);

 private:
  std::array<int, kMaxVertices> v_{-1, -1, -1, -1};
  std::uint8_t size_ = 0;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept;
};

std::ostream& operator<<(std::ostream& os, const Simplex& s);

enum class ComplexKind { VietorisRips, Alpha };

struct FilteredSimplex {
  Simplex simplex;
  double value = 0.0;
};

// Face-closed, value-monotone complex stored in canonical order: ascending
// (value, dim, vertices). Simplex indices refer to this order.
class FilteredComplex {
 public:
  FilteredComplex() = default;
  // Sorts into canonical order and validates face closure and monotonicity.
  FilteredComplex(std::vector<FilteredSimplex> simplices, ComplexKind kind,
                  int max_dim, std::size_t num_points);

  ComplexKind kind() const { return kind_; }
  int max_dim() const { return max_dim_; }
  std::size_t num_points() const { return num_points_; }
  std::size_t size() const { return simplices_.size(); }
  const FilteredSimplex& operator[](std::size_t i) const { return simplices_[i]; }
  const std::vector<FilteredSimplex>& simplices() const { return simplices_; }

  // Index in canonical order or -1.
  std::ptrdiff_t find(const Simplex& s) const;
  std::size_t count_of_dim(int dim) const;
  double max_value() const;

 private:
  std::vector<FilteredSimplex> simplices_;
  std::unordered_map<Simplex, std::size_t, SimplexHash> index_;
  ComplexKind kind_ = ComplexKind::VietorisRips;
  int max_dim_ = 0;
  std::size_t num_points_ = 0;
};

// K = {value <= t_small}, L = {value <= t_large}; index lists ascending,
// and because the complex is value-sorted both are prefixes.
struct SnapshotPair {
  double t_small = 0.0;
  double t_large = 0.0;
  std::vector<std::size_t> K;
  std::vector<std::size_t> L;
};

FilteredComplex build_vr(const DistanceMatrix& dist, int max_dim,
                         double max_scale = std::numeric_limits<double>::infinity());

// Alpha complex (radius convention) from the 3-D Delaunay triangulation,
// truncated at dimension 2. Throws DegenerateInput for fewer than 2 points.
FilteredComplex build_alpha(const LabeledPointCloud& cloud);

SnapshotPair snapshot_pair(const FilteredComplex& fc, double t, double delta);

// [face : coface] = (-1)^k with k the position of the vertex of `coface`
// missing from `face`. Throws NotAFace.
int signed_incidence(const Simplex& face, const Simplex& coface);

// Integer boundary matrix of dimension q over the whole complex: rows are
// (q-1)-simplices, columns q-simplices, both in canonical order.
std::vector<std::vector<int>> integer_boundary_matrix(const FilteredComplex& fc, int q);

// Line-oriented dump: "dim v0 v1 ... value" in canonical order.
void write_complex(std::ostream& os, const FilteredComplex& fc);

// Throws InvalidArgument describing the first face-closure or monotonicity
// violation.
void validate_complex(const FilteredComplex& fc);

}  // namespace psheaf
