#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "meshtok/mesh.hpp"

namespace meshtok {

inline constexpr std::size_t kDefaultSamplePoints = 10000;

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<std::uint32_t> source_face;  ///< face each point was drawn from

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Area-weighted surface samples: face drawn proportionally to area, point by
/// uniform barycentric coordinates. Deterministic for a fixed seed on every
/// platform, and a function of the face set alone: meshes that differ only in
/// windings or face order get the same points. Coordinates are lattice units, or divided by 2^bits - 1 when
/// `normalize` is set.
///
/// Throws Error when `n` is 0, the mesh has no faces, or every face has zero
/// area.
PointCloud sample_surface(const QuantizedMesh& mesh, std::size_t n, std::uint64_t seed,
                          bool normalize = false);

/// Exact nearest-neighbor queries over a fixed point set.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points);

  /// Euclidean distance to the closest point. The tree must be non-empty.
  double nearest_distance(const Vec3& query) const;

  std::size_t size() const noexcept { return points_.size(); }

 private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
    std::uint32_t left;
    std::uint32_t right;
    int axis;
    double split;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::uint32_t node, const Vec3& q, double& best_sq) const;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
};

/// Distance from every point of `from` to its nearest point in `to`.
std::vector<double> nearest_distances(const PointCloud& from, const KdTree& to);

/// Half the sum of both directed mean nearest-neighbor distances (unsquared).
/// Throws Error for an empty cloud.
double chamfer(const PointCloud& a, const PointCloud& b);

/// Larger of both directed maximum nearest-neighbor distances.
/// Throws Error for an empty cloud.
double hausdorff(const PointCloud& a, const PointCloud& b);

struct SetDistances {
  double chamfer = 0.0;
  double hausdorff = 0.0;
};

/// Both metrics from one pair of nearest-neighbor passes.
SetDistances set_distances(const PointCloud& a, const PointCloud& b);

}  // namespace meshtok
