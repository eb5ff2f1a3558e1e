#include "meshtok/geom_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "detail/rng.hpp"
#include "meshtok/error.hpp"

namespace meshtok {

namespace {

using detail::unit_double;

constexpr std::uint32_t kLeafSize = 8;
constexpr std::uint32_t kNoChild = 0xffffffffu;

Vec3 to_vec(const LatticePoint& p, double scale) {
  return {p[0] * scale, p[1] * scale, p[2] * scale};
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const Vec3 v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const Vec3 n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  return 0.5 * std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
}

double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

void require_points(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw Error("set distance of an empty point cloud");
}

}  // namespace

PointCloud sample_surface(const QuantizedMesh& mesh, std::size_t n, std::uint64_t seed,
                          bool normalize) {
  if (n == 0) throw Error("sample count must be positive");
  if (mesh.faces.empty()) throw Error("cannot sample a mesh without faces");
  const double scale = normalize ? 1.0 / static_cast<double>((1 << mesh.bits) - 1) : 1.0;

  // Faces are visited by sorted vertex ids, and parametrized from them, so the
  // samples depend on the face set only, not on windings or face order.
  std::vector<Face> sorted(mesh.faces.size());
  std::vector<std::uint32_t> order(mesh.faces.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    sorted[i] = mesh.faces[i];
    std::sort(sorted[i].begin(), sorted[i].end());
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return sorted[a] < sorted[b]; });

  std::vector<double> cumulative;
  cumulative.reserve(order.size());
  double total = 0.0;
  for (auto f : order) {
    const auto& t = sorted[f];
    total += triangle_area(to_vec(mesh.vertices[t[0]], scale), to_vec(mesh.vertices[t[1]], scale),
                           to_vec(mesh.vertices[t[2]], scale));
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw Error("every face has zero area");

  std::mt19937_64 rng(seed);
  PointCloud cloud;
  cloud.points.reserve(n);
  cloud.source_face.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = unit_double(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const auto face = order[static_cast<std::size_t>(it - cumulative.begin())];
    const double r1 = std::sqrt(unit_double(rng));
    const double r2 = unit_double(rng);
    const double wa = 1.0 - r1;
    const double wb = r1 * (1.0 - r2);
    const double wc = r1 * r2;
    const auto& t = sorted[face];
    const Vec3 a = to_vec(mesh.vertices[t[0]], scale);
    const Vec3 b = to_vec(mesh.vertices[t[1]], scale);
    const Vec3 c = to_vec(mesh.vertices[t[2]], scale);
    cloud.points.push_back({wa * a[0] + wb * b[0] + wc * c[0], wa * a[1] + wb * b[1] + wc * c[1],
                            wa * a[2] + wb * b[2] + wc * c[2]});
    cloud.source_face.push_back(face);
  }
  return cloud;
}

KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 1);
    build(0, static_cast<std::uint32_t>(points_.size()));
  }
}

std::uint32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({begin, end, kNoChild, kNoChild, 0, 0.0});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo = points_[begin];
  Vec3 hi = lo;
  for (auto i = begin; i < end; ++i) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], points_[i][a]);
      hi[a] = std::max(hi[a], points_[i][a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  const auto mid = begin + (end - begin) / 2;
  std::nth_element(points_.begin() + begin, points_.begin() + mid, points_.begin() + end,
                   [axis](const Vec3& p, const Vec3& q) { return p[axis] < q[axis]; });
  const double split = points_[mid][axis];
  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(std::uint32_t id, const Vec3& q, double& best_sq) const {
  const Node& node = nodes_[id];
  if (node.left == kNoChild) {
    for (auto i = node.begin; i < node.end; ++i) best_sq = std::min(best_sq, squared_distance(q, points_[i]));
    return;
  }
  // Points left of mid are <= split on the axis, points right are >= split.
  const double d = q[node.axis] - node.split;
  const auto near = d < 0 ? node.left : node.right;
  const auto far = d < 0 ? node.right : node.left;
  search(near, q, best_sq);
  if (d * d < best_sq) search(far, q, best_sq);
}

double KdTree::nearest_distance(const Vec3& query) const {
  if (points_.empty()) throw Error("nearest neighbor in an empty set");
  double best = std::numeric_limits<double>::infinity();
  search(0, query, best);
  return std::sqrt(best);
}

std::vector<double> nearest_distances(const PointCloud& from, const KdTree& to) {
  std::vector<double> out;
  out.reserve(from.size());
  for (const auto& p : from.points) out.push_back(to.nearest_distance(p));
  return out;
}

SetDistances set_distances(const PointCloud& a, const PointCloud& b) {
  require_points(a, b);
  const KdTree ta(a.points);
  const KdTree tb(b.points);
  const auto ab = nearest_distances(a, tb);
  const auto ba = nearest_distances(b, ta);
  const auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  SetDistances out;
  out.chamfer = 0.5 * (mean(ab) + mean(ba));
  out.hausdorff = std::max(*std::max_element(ab.begin(), ab.end()),
                           *std::max_element(ba.begin(), ba.end()));
  return out;
}

double chamfer(const PointCloud& a, const PointCloud& b) { return set_distances(a, b).chamfer; }

double hausdorff(const PointCloud& a, const PointCloud& b) { return set_distances(a, b).hausdorff; }

}  // namespace meshtok
