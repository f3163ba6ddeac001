#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace psheaf {

using Vec3 = Eigen::Vector3d;
using DistanceMatrix = Eigen::MatrixXd;

struct LabeledPoint {
  int id = 0;
  Vec3 coords = Vec3::Zero();
  double charge = 0.0;
  std::string element;  // uppercase symbol, may be empty
};

struct CloudOptions {
  // Minimum allowed pairwise separation in Angstrom.
  double min_separation = 1e-9;
  // Opt-in: displace every coordinate by uniform noise in [-jitter_amplitude,
  // +jitter_amplitude] drawn from a generator seeded with jitter_seed.
  bool jitter = false;
  double jitter_amplitude = 1e-6;
  std::uint64_t jitter_seed = 0;
};

// Ordered, validated point cloud. Simplices address points by position
// (0-based index into points()); LabeledPoint::id is the caller's label.
class LabeledPointCloud {
 public:
  LabeledPointCloud() = default;

  // Throws OverlappingPoints, InvalidArgument (empty, non-finite coords,
  // duplicate ids).
  explicit LabeledPointCloud(std::vector<LabeledPoint> points,
                             const CloudOptions& options = {});

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const LabeledPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<LabeledPoint>& points() const { return points_; }

  const Vec3& coords(std::size_t i) const { return points_[i].coords; }
  double charge(std::size_t i) const { return points_[i].charge; }
  std::vector<double> charges() const;

  // Position of the point carrying `id`; throws InvalidArgument if absent.
  std::size_t index_of(int id) const;

 private:
  std::vector<LabeledPoint> points_;
};

enum class DistanceKind { Euclidean, BipartiteModified };

struct DistanceSpec {
  DistanceKind kind = DistanceKind::Euclidean;
  std::vector<int> set_a;  // point ids
  std::vector<int> set_b;

  static DistanceSpec euclidean() { return {}; }
  static DistanceSpec bipartite(std::vector<int> a, std::vector<int> b) {
    return {DistanceKind::BipartiteModified, std::move(a), std::move(b)};
  }
};

double euclidean_distance(const Vec3& a, const Vec3& b);

// Symmetric matrix with zero diagonal. Under BipartiteModified, same-set
// off-diagonal entries are +infinity.
DistanceMatrix pairwise_distances(const LabeledPointCloud& cloud,
                                  const DistanceSpec& spec);

// Per-point side (0 = set A, 1 = set B); throws InvalidPartition.
std::vector<int> bipartite_sides(const LabeledPointCloud& cloud,
                                 const DistanceSpec& spec);

}  // namespace psheaf
