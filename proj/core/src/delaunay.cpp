#include "psheaf/delaunay.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

#include "psheaf/errors.hpp"
#include "psheaf/predicates.hpp"

namespace psheaf {

namespace {

struct Tet {
  std::array<int, 4> v{};
  std::array<int, 4> nbr{-1, -1, -1, -1};  // nbr[i] is opposite v[i]
  bool alive = true;
};

// Bowyer-Watson insertion inside an enclosing tetrahedron. Vertex indices
// >= n_real denote the four enclosing vertices.
class Triangulator {
 public:
  explicit Triangulator(std::span<const Vec3> points) : n_real_(points.size()) {
    pts_.assign(points.begin(), points.end());
    Vec3 lo = pts_.front(), hi = pts_.front();
    for (const auto& p : pts_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec3 center = 0.5 * (lo + hi);
    const double extent = std::max((hi - lo).maxCoeff(), 1.0);
    const double s = 1.0e4 * extent;
    pts_.push_back(center + s * Vec3(1, 1, 1));
    pts_.push_back(center + s * Vec3(1, -1, -1));
    pts_.push_back(center + s * Vec3(-1, 1, -1));
    pts_.push_back(center + s * Vec3(-1, -1, 1));

    const int b = static_cast<int>(n_real_);
    Tet root;
    root.v = {b, b + 1, b + 2, b + 3};
    if (orient(root.v) < 0) std::swap(root.v[0], root.v[1]);
    tets_.push_back(root);
    last_ = 0;
  }

  void insert_all() {
    std::vector<int> order(n_real_);
    for (std::size_t i = 0; i < n_real_; ++i) order[i] = static_cast<int>(i);
    // Fisher-Yates on raw engine output keeps the order platform-stable.
    std::mt19937_64 rng(0x5eedULL);
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    for (int p : order) insert(p);
  }

  DelaunayComplex extract() const {
    std::set<std::array<int, 2>> edges;
    std::set<std::array<int, 3>> triangles;
    std::set<std::array<int, 4>> tets;
    const int n = static_cast<int>(n_real_);
    for (const auto& t : tets_) {
      if (!t.alive) continue;
      std::array<int, 4> v = t.v;
      std::sort(v.begin(), v.end());
      if (v[3] < n) tets.insert(v);
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          if (v[j] < n) edges.insert({v[i], v[j]});
          for (int k = j + 1; k < 4; ++k) {
            if (v[k] < n) triangles.insert({v[i], v[j], v[k]});
          }
        }
      }
    }
    DelaunayComplex out;
    out.edges.assign(edges.begin(), edges.end());
    out.triangles.assign(triangles.begin(), triangles.end());
    out.tetrahedra.assign(tets.begin(), tets.end());
    return out;
  }

 private:
  int orient(const std::array<int, 4>& v) const {
    return predicates::orient3d(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[v[3]]);
  }

  bool in_conflict(const Tet& t, int p) const {
    const int priority[5] = {t.v[0], t.v[1], t.v[2], t.v[3], p};
    return predicates::insphere_sos(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], pts_[t.v[3]],
                                    pts_[p], priority) > 0;
  }

  // Face i of t separates p from t when p and t.v[i] are on opposite sides.
  bool separated(const Tet& t, int i, int p) const {
    std::array<int, 4> w = t.v;
    w[i] = p;
    return orient(w) < 0;
  }

  int locate(int p) {
    int cur = last_;
    std::size_t steps = 0;
    const std::size_t max_steps = 4 * tets_.size() + 64;
    while (steps++ < max_steps) {
      const Tet& t = tets_[cur];
      const int start = static_cast<int>(walk_rng_() & 3U);
      int next = -1;
      for (int k = 0; k < 4; ++k) {
        const int i = (start + k) & 3;
        if (t.nbr[i] >= 0 && separated(t, i, p)) {
          next = t.nbr[i];
          break;
        }
      }
      if (next < 0) return cur;
      cur = next;
    }
    // The visibility walk terminates on Delaunay meshes; keep a brute-force
    // path so a logic error degrades to slowness rather than a wrong answer.
    for (std::size_t i = 0; i < tets_.size(); ++i) {
      if (tets_[i].alive && in_conflict(tets_[i], p)) return static_cast<int>(i);
    }
    throw Error(ErrorCode::Numerical, "Delaunay point location failed");
  }

  void insert(int p) {
    const int seed = locate(p);
    if (!in_conflict(tets_[seed], p)) {
      throw Error(ErrorCode::Numerical, "located tetrahedron does not conflict with point");
    }

    ++stamp_;
    if (mark_.size() < tets_.size()) mark_.resize(tets_.size(), 0);
    // mark_ == stamp_: in cavity; mark_ == -stamp_: tested, outside.
    std::vector<int> cavity{seed};
    mark_[seed] = stamp_;
    for (std::size_t head = 0; head < cavity.size(); ++head) {
      const Tet& t = tets_[cavity[head]];
      for (int i = 0; i < 4; ++i) {
        const int nb = t.nbr[i];
        if (nb < 0 || mark_[nb] == stamp_ || mark_[nb] == -stamp_) continue;
        if (in_conflict(tets_[nb], p)) {
          mark_[nb] = stamp_;
          cavity.push_back(nb);
        } else {
          mark_[nb] = -stamp_;
        }
      }
    }

    struct BoundaryFace {
      std::array<int, 4> v;
      int face;
      int outside;
      int outside_face;
    };
    std::vector<BoundaryFace> boundary;
    for (int c : cavity) {
      const Tet& t = tets_[c];
      for (int i = 0; i < 4; ++i) {
        const int nb = t.nbr[i];
        if (nb >= 0 && mark_[nb] == stamp_) continue;
        int back = -1;
        if (nb >= 0) {
          const auto& on = tets_[nb].nbr;
          back = static_cast<int>(std::find(on.begin(), on.end(), c) - on.begin());
        }
        boundary.push_back({t.v, i, nb, back});
      }
    }
    for (int c : cavity) {
      tets_[c].alive = false;
      free_.push_back(c);
    }

    std::unordered_map<std::uint64_t, std::pair<int, int>> open_faces;
    open_faces.reserve(boundary.size() * 3);
    for (const auto& bf : boundary) {
      Tet nt;
      nt.v = bf.v;
      nt.v[bf.face] = p;
      if (orient(nt.v) <= 0) {
        throw Error(ErrorCode::Numerical, "Delaunay cavity is not star-shaped");
      }
      nt.nbr[bf.face] = bf.outside;
      const int id = allocate(nt);
      if (bf.outside >= 0) tets_[bf.outside].nbr[bf.outside_face] = id;
      for (int j = 0; j < 4; ++j) {
        if (j == bf.face) continue;
        int a = -1, b = -1;
        for (int k = 0; k < 4; ++k) {
          if (k == j || nt.v[k] == p) continue;
          (a < 0 ? a : b) = nt.v[k];
        }
        if (a > b) std::swap(a, b);
        const std::uint64_t key =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
            static_cast<std::uint32_t>(b);
        auto [it, inserted] = open_faces.try_emplace(key, id, j);
        if (!inserted) {
          tets_[id].nbr[j] = it->second.first;
          tets_[it->second.first].nbr[it->second.second] = id;
          open_faces.erase(it);
        }
      }
      last_ = id;
    }
    if (!open_faces.empty()) {
      throw Error(ErrorCode::Numerical, "Delaunay cavity boundary is not closed");
    }
  }

  int allocate(const Tet& t) {
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      tets_[id] = t;
      return id;
    }
    tets_.push_back(t);
    mark_.push_back(0);
    return static_cast<int>(tets_.size() - 1);
  }

  std::size_t n_real_;
  std::vector<Vec3> pts_;
  std::vector<Tet> tets_;
  std::vector<int> free_;
  std::vector<int> mark_;
  int stamp_ = 0;
  int last_ = 0;
  std::minstd_rand walk_rng_{12345};
};

}  // namespace

DelaunayComplex delaunay_3d(std::span<const Vec3> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::DegenerateInput, "Delaunay triangulation needs at least 2 points");
  }
  Triangulator tri(points);
  tri.insert_all();
  return tri.extract();
}

}  // namespace psheaf
