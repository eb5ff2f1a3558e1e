#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace meshtok {

using Vec3 = std::array<double, 3>;
/// Integer lattice position, components ordered (x, y, z).
using LatticePoint = std::array<std::int32_t, 3>;
/// Vertex-index triple, 0-based.
using Face = std::array<std::uint32_t, 3>;

inline constexpr int kDefaultBits = 7;
inline constexpr std::uint32_t kNoIndex = std::numeric_limits<std::uint32_t>::max();

/// Triangle mesh in model space, as read from disk or generated.
struct RawMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  bool empty() const noexcept { return vertices.empty(); }
};

/// Throws meshtok::Error when a face references a missing vertex or repeats
/// an index.
void validate(const RawMesh& mesh);

/// Triangle mesh on the integer lattice [0, 2^bits - 1]^3.
///
/// A mesh produced by quantize(), weld() or canonicalize() satisfies:
///   - vertex positions unique and sorted ascending by (z, y, x);
///   - every face rotated so its smallest vertex id comes first (winding kept);
///   - faces sorted lexicographically, no duplicates as unordered triples;
///   - no face with repeated ids or repeated positions;
///   - every vertex referenced by at least one face (when faces exist).
struct QuantizedMesh {
  int bits = kDefaultBits;
  std::vector<LatticePoint> vertices;
  std::vector<Face> faces;

  std::size_t face_count() const noexcept { return faces.size(); }
  bool operator==(const QuantizedMesh&) const = default;
};

/// What cleanup removed while building a canonical mesh.
struct CleanupCounts {
  std::size_t merged_vertices = 0;       ///< raw vertices folded into an existing lattice point
  std::size_t degenerate_faces = 0;      ///< repeated id or repeated position
  std::size_t duplicate_faces = 0;       ///< same unordered vertex set as an earlier face
  std::size_t unreferenced_vertices = 0;

  CleanupCounts& operator+=(const CleanupCounts& other);
};

/// Normalize into the lattice with one scale factor for all axes (aspect ratio
/// preserved), centered on the bounding-box midrange, round half up, then
/// weld(). `bits` must lie in [1, 10].
///
/// Throws meshtok::Error for an empty vertex list, a zero-extent bounding box,
/// or an out-of-range `bits`.
QuantizedMesh quantize(const RawMesh& mesh, int bits = kDefaultBits,
                       CleanupCounts* counts = nullptr);

/// Sort vertices by (z, y, x), rotate faces lowest-id-first, sort faces.
/// Assumes positions are already unique.
QuantizedMesh canonicalize(const QuantizedMesh& mesh);

/// Unify identical positions, drop degenerate/duplicate faces and unreferenced
/// vertices, then canonicalize. Decoders route their output through here.
QuantizedMesh weld(const QuantizedMesh& mesh, CleanupCounts* counts = nullptr);

/// Face with its vertex ids rotated so the smallest comes first.
Face rotate_lowest_first(const Face& face) noexcept;

/// Undirected edge -> incident faces, plus per-face neighbor lookup.
///
/// Local edge k of face f joins faces[f][k] and faces[f][(k + 1) % 3].
class EdgeAdjacency {
 public:
  struct Edge {
    std::uint32_t lo = 0;  ///< smaller vertex id
    std::uint32_t hi = 0;
    std::vector<std::uint32_t> faces;

    bool interior() const noexcept { return faces.size() == 2; }
  };

  explicit EdgeAdjacency(const QuantizedMesh& mesh);

  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Face across local edge `k` of `face`, or kNoIndex when that edge is a
  /// boundary or non-manifold.
  std::uint32_t neighbor(std::uint32_t face, int k) const {
    return neighbors_[face][static_cast<std::size_t>(k)];
  }

  /// Edge index of local edge `k` of `face`.
  std::uint32_t edge_of(std::uint32_t face, int k) const {
    return face_edges_[face][static_cast<std::size_t>(k)];
  }

  /// Face sharing the interior edge {u, v} with `face`, or kNoIndex.
  std::uint32_t across(const QuantizedMesh& mesh, std::uint32_t face,
                       std::uint32_t u, std::uint32_t v) const;

  std::size_t interior_edge_count() const noexcept;

 private:
  std::vector<Edge> edges_;
  std::vector<std::array<std::uint32_t, 3>> face_edges_;
  std::vector<std::array<std::uint32_t, 3>> neighbors_;
};

/// Half-edge connectivity. Half-edge 3f + k starts at faces[f][k].
struct HalfEdge {
  std::uint32_t origin = 0;
  std::uint32_t face = 0;
  std::uint32_t next = 0;
  std::uint32_t twin = kNoIndex;
};

class HalfEdgeMesh {
 public:
  /// Twins are linked only where exactly two faces use an edge, in opposite
  /// directions. Same-direction use (inconsistent winding) and non-manifold
  /// edges stay twinless.
  explicit HalfEdgeMesh(const QuantizedMesh& mesh);

  std::size_t size() const noexcept { return half_edges_.size(); }
  const HalfEdge& operator[](std::uint32_t h) const { return half_edges_[h]; }
  const std::vector<HalfEdge>& half_edges() const noexcept { return half_edges_; }

  std::uint32_t next(std::uint32_t h) const { return half_edges_[h].next; }
  std::uint32_t prev(std::uint32_t h) const { return next(next(h)); }
  std::uint32_t twin(std::uint32_t h) const { return half_edges_[h].twin; }
  std::uint32_t face(std::uint32_t h) const { return half_edges_[h].face; }
  std::uint32_t origin(std::uint32_t h) const { return half_edges_[h].origin; }
  std::uint32_t dest(std::uint32_t h) const { return origin(next(h)); }

  std::size_t twin_pair_count() const noexcept;

 private:
  std::vector<HalfEdge> half_edges_;
};

}  // namespace meshtok
