#include "meshtok/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "meshtok/error.hpp"

namespace meshtok {

namespace {

bool zyx_less(const LatticePoint& a, const LatticePoint& b) {
  return std::tie(a[2], a[1], a[0]) < std::tie(b[2], b[1], b[0]);
}

Face sorted_ids(Face f) {
  std::sort(f.begin(), f.end());
  return f;
}

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

CleanupCounts& CleanupCounts::operator+=(const CleanupCounts& other) {
  merged_vertices += other.merged_vertices;
  degenerate_faces += other.degenerate_faces;
  duplicate_faces += other.duplicate_faces;
  unreferenced_vertices += other.unreferenced_vertices;
  return *this;
}

void validate(const RawMesh& mesh) {
  const auto n = mesh.vertices.size();
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const Face& f = mesh.faces[i];
    for (auto id : f) {
      if (id >= n) {
        throw Error("face " + std::to_string(i) + " references vertex " +
                    std::to_string(id) + " of " + std::to_string(n));
      }
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throw Error("face " + std::to_string(i) + " repeats a vertex index");
    }
  }
}

Face rotate_lowest_first(const Face& f) noexcept {
  if (f[1] < f[0] && f[1] < f[2]) return {f[1], f[2], f[0]};
  if (f[2] < f[0] && f[2] < f[1]) return {f[2], f[0], f[1]};
  return f;
}

QuantizedMesh quantize(const RawMesh& mesh, int bits, CleanupCounts* counts) {
  if (bits < 1 || bits > 10) {
    throw Error("quantization bits must be in [1, 10], got " + std::to_string(bits));
  }
  if (mesh.vertices.empty()) throw Error("cannot quantize an empty mesh");
  validate(mesh);

  Vec3 lo = mesh.vertices.front();
  Vec3 hi = lo;
  for (const auto& v : mesh.vertices) {
    for (int a = 0; a < 3; ++a) {
      if (!std::isfinite(v[a])) throw Error("non-finite vertex coordinate");
      lo[a] = std::min(lo[a], v[a]);
      hi[a] = std::max(hi[a], v[a]);
    }
  }
  double extent = 0.0;
  for (int a = 0; a < 3; ++a) extent = std::max(extent, hi[a] - lo[a]);
  if (!(extent > 0.0)) throw Error("mesh bounding box has zero extent");

  const std::int32_t top = (1 << bits) - 1;
  const double scale = static_cast<double>(top) / extent;
  const double half = static_cast<double>(top) / 2.0;

  QuantizedMesh q;
  q.bits = bits;
  q.vertices.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) {
    LatticePoint p{};
    for (int a = 0; a < 3; ++a) {
      const double mid = 0.5 * (lo[a] + hi[a]);
      const double t = (v[a] - mid) * scale + half;
      const auto r = static_cast<std::int32_t>(std::floor(t + 0.5));
      p[a] = std::clamp(r, std::int32_t{0}, top);
    }
    q.vertices.push_back(p);
  }
  q.faces = mesh.faces;
  return weld(q, counts);
}

QuantizedMesh canonicalize(const QuantizedMesh& mesh) {
  const auto n = mesh.vertices.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return zyx_less(mesh.vertices[a], mesh.vertices[b]);
  });
  std::vector<std::uint32_t> remap(n);
  QuantizedMesh out;
  out.bits = mesh.bits;
  out.vertices.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    remap[order[i]] = i;
    out.vertices.push_back(mesh.vertices[order[i]]);
  }
  out.faces.reserve(mesh.faces.size());
  for (const auto& f : mesh.faces) {
    out.faces.push_back(rotate_lowest_first({remap[f[0]], remap[f[1]], remap[f[2]]}));
  }
  std::sort(out.faces.begin(), out.faces.end());
  return out;
}

QuantizedMesh weld(const QuantizedMesh& mesh, CleanupCounts* counts) {
  CleanupCounts local;
  const auto n = mesh.vertices.size();

  // Unique positions in (z, y, x) order; ids follow that order directly.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return zyx_less(mesh.vertices[a], mesh.vertices[b]);
  });
  std::vector<std::uint32_t> to_unique(n);
  std::vector<LatticePoint> unique;
  unique.reserve(n);
  for (auto idx : order) {
    if (unique.empty() || unique.back() != mesh.vertices[idx]) {
      unique.push_back(mesh.vertices[idx]);
    } else {
      ++local.merged_vertices;
    }
    to_unique[idx] = static_cast<std::uint32_t>(unique.size() - 1);
  }

  std::vector<Face> faces;
  faces.reserve(mesh.faces.size());
  for (const auto& f : mesh.faces) {
    if (f[0] >= n || f[1] >= n || f[2] >= n) {
      throw Error("face references a vertex outside the mesh");
    }
    const Face g{to_unique[f[0]], to_unique[f[1]], to_unique[f[2]]};
    if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) {
      ++local.degenerate_faces;
      continue;
    }
    faces.push_back(rotate_lowest_first(g));
  }

  // Among duplicates keep the lexicographically smallest winding, independent
  // of input face order.
  std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    const Face sa = sorted_ids(a);
    const Face sb = sorted_ids(b);
    return sa != sb ? sa < sb : a < b;
  });
  const auto last = std::unique(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    return sorted_ids(a) == sorted_ids(b);
  });
  local.duplicate_faces = static_cast<std::size_t>(faces.end() - last);
  faces.erase(last, faces.end());

  QuantizedMesh out;
  out.bits = mesh.bits;
  if (faces.empty()) {
    out.vertices = std::move(unique);
  } else {
    std::vector<std::uint32_t> compact(unique.size(), kNoIndex);
    for (const auto& f : faces) {
      for (auto id : f) compact[id] = 0;
    }
    for (std::uint32_t i = 0; i < unique.size(); ++i) {
      if (compact[i] == kNoIndex) {
        ++local.unreferenced_vertices;
        continue;
      }
      compact[i] = static_cast<std::uint32_t>(out.vertices.size());
      out.vertices.push_back(unique[i]);
    }
    // The remap is monotone, so rotation and face order survive it.
    for (auto& f : faces) {
      for (auto& id : f) id = compact[id];
    }
    std::sort(faces.begin(), faces.end());
    out.faces = std::move(faces);
  }

  if (counts) *counts += local;
  return out;
}

EdgeAdjacency::EdgeAdjacency(const QuantizedMesh& mesh) {
  struct Record {
    std::uint64_t key;
    std::uint32_t face;
    int local;
  };
  std::vector<Record> records;
  records.reserve(mesh.faces.size() * 3);
  for (std::uint32_t f = 0; f < mesh.faces.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      records.push_back({edge_key(mesh.faces[f][k], mesh.faces[f][(k + 1) % 3]), f, k});
    }
  }
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    return std::tie(a.key, a.face, a.local) < std::tie(b.key, b.face, b.local);
  });

  face_edges_.assign(mesh.faces.size(), {kNoIndex, kNoIndex, kNoIndex});
  neighbors_.assign(mesh.faces.size(), {kNoIndex, kNoIndex, kNoIndex});
  for (std::size_t i = 0; i < records.size();) {
    std::size_t j = i;
    Edge edge;
    edge.lo = static_cast<std::uint32_t>(records[i].key >> 32);
    edge.hi = static_cast<std::uint32_t>(records[i].key & 0xffffffffu);
    const auto id = static_cast<std::uint32_t>(edges_.size());
    for (; j < records.size() && records[j].key == records[i].key; ++j) {
      edge.faces.push_back(records[j].face);
      face_edges_[records[j].face][static_cast<std::size_t>(records[j].local)] = id;
    }
    if (edge.interior()) {
      neighbors_[records[i].face][static_cast<std::size_t>(records[i].local)] = records[i + 1].face;
      neighbors_[records[i + 1].face][static_cast<std::size_t>(records[i + 1].local)] = records[i].face;
    }
    edges_.push_back(std::move(edge));
    i = j;
  }
}

std::uint32_t EdgeAdjacency::across(const QuantizedMesh& mesh, std::uint32_t face,
                                    std::uint32_t u, std::uint32_t v) const {
  const Face& f = mesh.faces[face];
  for (int k = 0; k < 3; ++k) {
    const auto a = f[k];
    const auto b = f[(k + 1) % 3];
    if ((a == u && b == v) || (a == v && b == u)) return neighbor(face, k);
  }
  return kNoIndex;
}

std::size_t EdgeAdjacency::interior_edge_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.interior(); }));
}

HalfEdgeMesh::HalfEdgeMesh(const QuantizedMesh& mesh) {
  const auto nf = static_cast<std::uint32_t>(mesh.faces.size());
  half_edges_.resize(static_cast<std::size_t>(nf) * 3);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
  keyed.reserve(half_edges_.size());
  for (std::uint32_t f = 0; f < nf; ++f) {
    for (std::uint32_t k = 0; k < 3; ++k) {
      const std::uint32_t h = 3 * f + k;
      half_edges_[h].origin = mesh.faces[f][k];
      half_edges_[h].face = f;
      half_edges_[h].next = 3 * f + (k + 1) % 3;
      keyed.emplace_back(edge_key(mesh.faces[f][k], mesh.faces[f][(k + 1) % 3]), h);
    }
  }
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
    if (j - i == 2) {
      const auto a = keyed[i].second;
      const auto b = keyed[i + 1].second;
      if (half_edges_[a].origin != half_edges_[b].origin) {
        half_edges_[a].twin = b;
        half_edges_[b].twin = a;
      }
    }
    i = j;
  }
}

std::size_t HalfEdgeMesh::twin_pair_count() const noexcept {
  std::size_t linked = 0;
  for (const auto& h : half_edges_) linked += h.twin != kNoIndex;
  return linked / 2;
}

}  // namespace meshtok
