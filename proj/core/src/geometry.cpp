#include "psheaf/geometry.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "psheaf/errors.hpp"

namespace psheaf {

namespace {

double uniform_pm1(std::mt19937_64& rng) {
  // 53-bit mantissa draw mapped to [-1, 1); avoids implementation-defined
  // distribution objects so jittered coordinates are reproducible everywhere.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

LabeledPointCloud::LabeledPointCloud(std::vector<LabeledPoint> points,
                                     const CloudOptions& options)
    : points_(std::move(points)) {
  if (points_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "point cloud is empty");
  }
  if (options.jitter) {
    std::mt19937_64 rng(options.jitter_seed);
    for (auto& p : points_) {
      for (int k = 0; k < 3; ++k) {
        p.coords[k] += options.jitter_amplitude * uniform_pm1(rng);
      }
    }
  }
  std::unordered_set<int> ids;
  for (const auto& p : points_) {
    if (!p.coords.allFinite()) {
      throw Error(ErrorCode::InvalidArgument,
                  "point " + std::to_string(p.id) + " has non-finite coordinates");
    }
    if (!std::isfinite(p.charge)) {
      throw Error(ErrorCode::InvalidArgument,
                  "point " + std::to_string(p.id) + " has a non-finite charge");
    }
    if (!ids.insert(p.id).second) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate point id " + std::to_string(p.id));
    }
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      const double d = euclidean_distance(points_[i].coords, points_[j].coords);
      if (d <= options.min_separation) {
        std::ostringstream msg;
        msg << "points " << points_[i].id << " and " << points_[j].id
            << " are closer than " << options.min_separation << " A";
        throw Error(ErrorCode::OverlappingPoints, msg.str());
      }
    }
  }
}

std::vector<double> LabeledPointCloud::charges() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.charge);
  return out;
}

std::size_t LabeledPointCloud::index_of(int id) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].id == id) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "no point with id " + std::to_string(id));
}

double euclidean_distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

std::vector<int> bipartite_sides(const LabeledPointCloud& cloud,
                                 const DistanceSpec& spec) {
  std::unordered_map<int, std::size_t> position;
  for (std::size_t i = 0; i < cloud.size(); ++i) position.emplace(cloud[i].id, i);

  std::vector<int> side(cloud.size(), -1);
  auto assign = [&](const std::vector<int>& ids, int label) {
    for (int id : ids) {
      auto it = position.find(id);
      if (it == position.end()) {
        throw Error(ErrorCode::InvalidPartition,
                    "bipartite set references unknown point id " + std::to_string(id));
      }
      if (side[it->second] != -1) {
        throw Error(ErrorCode::InvalidPartition,
                    "point id " + std::to_string(id) + " appears in both bipartite sets");
      }
      side[it->second] = label;
    }
  };
  assign(spec.set_a, 0);
  assign(spec.set_b, 1);
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (side[i] == -1) {
      throw Error(ErrorCode::InvalidPartition,
                  "point id " + std::to_string(cloud[i].id) + " is in neither bipartite set");
    }
  }
  return side;
}

DistanceMatrix pairwise_distances(const LabeledPointCloud& cloud,
                                  const DistanceSpec& spec) {
  const auto n = static_cast<Eigen::Index>(cloud.size());
  DistanceMatrix dist = DistanceMatrix::Zero(n, n);
  std::vector<int> side;
  if (spec.kind == DistanceKind::BipartiteModified) side = bipartite_sides(cloud, spec);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double d = euclidean_distance(cloud.coords(i), cloud.coords(j));
      if (!side.empty() && side[i] == side[j]) d = kInf;
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

}  // namespace psheaf
