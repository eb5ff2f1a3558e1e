#include "meshtok/tokenizers.hpp"

#include <string>
#include <vector>

#include "meshtok/error.hpp"

namespace meshtok {

namespace {

void require_encodable(const QuantizedMesh& mesh) {
  if (mesh.bits > 7) {
    throw Error("tokenizers carry 7-bit coordinates; mesh uses " + std::to_string(mesh.bits) +
                " bits");
  }
}

void emit_vertex(std::vector<SymbolId>& out, const LatticePoint& p) {
  out.push_back(static_cast<SymbolId>(p[0]));
  out.push_back(static_cast<SymbolId>(p[1]));
  out.push_back(static_cast<SymbolId>(p[2]));
}

/// Collects decoded faces on positions, welded at the end.
class FaceSink {
 public:
  explicit FaceSink(int bits) { mesh_.bits = bits; }

  std::uint32_t add_vertex(const SymbolId* c) {
    mesh_.vertices.push_back({static_cast<std::int32_t>(c[0]), static_cast<std::int32_t>(c[1]),
                              static_cast<std::int32_t>(c[2])});
    return static_cast<std::uint32_t>(mesh_.vertices.size() - 1);
  }

  void add_face(std::uint32_t a, std::uint32_t b, std::uint32_t c) { mesh_.faces.push_back({a, b, c}); }

  QuantizedMesh finish(std::size_t* dropped = nullptr) {
    CleanupCounts counts;
    auto out = weld(mesh_, &counts);
    if (dropped) *dropped += counts.degenerate_faces + counts.duplicate_faces;
    return out;
  }

 private:
  QuantizedMesh mesh_;
};

/// Splits at SUB_END. The returned runs exclude the delimiter; `terminated`
/// reports whether the final run was closed.
std::vector<std::span<const SymbolId>> split_runs(std::span<const SymbolId> s, bool& terminated) {
  std::vector<std::span<const SymbolId>> runs;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == kSubEnd) {
      runs.push_back(s.subspan(start, i - start));
      start = i + 1;
    }
  }
  terminated = start == s.size();
  if (!terminated) runs.push_back(s.subspan(start));
  return runs;
}

[[noreturn]] void fail(const std::string& what, std::size_t run) {
  throw DecodeError(what + " (run " + std::to_string(run) + ")");
}

}  // namespace

SymbolSequence raw_encode(const QuantizedMesh& mesh) {
  require_encodable(mesh);
  SymbolSequence seq{TokenizerKind::Raw, {}};
  seq.symbols.reserve(mesh.faces.size() * 9);
  for (const auto& f : mesh.faces) {
    for (auto v : f) emit_vertex(seq.symbols, mesh.vertices[v]);
  }
  return seq;
}

QuantizedMesh raw_decode(const SymbolSequence& seq, DecodeMode mode, int bits,
                         std::size_t* dropped) {
  const auto& s = seq.symbols;
  std::size_t usable = s.size() - s.size() % 9;
  if (s.size() % 9 != 0 && mode == DecodeMode::Strict) {
    throw DecodeError("RAW length " + std::to_string(s.size()) +
                      " is not a multiple of 9 (residue " + std::to_string(s.size() % 9) + ")");
  }
  FaceSink sink(bits);
  for (std::size_t i = 0; i < usable; i += 9) {
    bool ok = true;
    for (std::size_t k = 0; k < 9; ++k) ok = ok && is_coordinate(s[i + k]);
    if (!ok) {
      if (mode == DecodeMode::Strict) throw DecodeError("non-coordinate symbol in RAW stream");
      continue;
    }
    const auto a = sink.add_vertex(&s[i]);
    const auto b = sink.add_vertex(&s[i + 3]);
    const auto c = sink.add_vertex(&s[i + 6]);
    sink.add_face(a, b, c);
  }
  return sink.finish(dropped);
}

SymbolSequence amt_encode(const QuantizedMesh& mesh, TraversalStats* stats) {
  return amt_encode(mesh, EdgeAdjacency(mesh), stats);
}

SymbolSequence amt_encode(const QuantizedMesh& mesh, const EdgeAdjacency& adjacency,
                          TraversalStats* stats) {
  require_encodable(mesh);
  TraversalStats local;
  SymbolSequence seq{TokenizerKind::Amt, {}};
  const auto nf = static_cast<std::uint32_t>(mesh.faces.size());
  std::vector<bool> visited(nf, false);
  std::uint32_t seed = 0;
  for (;;) {
    while (seed < nf && visited[seed]) ++seed;
    if (seed == nf) break;
    ++local.runs;
    std::uint32_t cur = seed;
    visited[cur] = true;
    const Face& f = mesh.faces[cur];
    for (auto v : f) emit_vertex(seq.symbols, mesh.vertices[v]);
    local.triples += 3;
    std::uint32_t p = f[1];
    std::uint32_t q = f[2];
    for (;;) {
      const auto next = adjacency.across(mesh, cur, p, q);
      if (next == kNoIndex || visited[next]) break;
      const Face& g = mesh.faces[next];
      std::uint32_t r = g[0];
      for (auto v : g) {
        if (v != p && v != q) r = v;
      }
      emit_vertex(seq.symbols, mesh.vertices[r]);
      ++local.triples;
      visited[next] = true;
      cur = next;
      p = q;
      q = r;
    }
    seq.symbols.push_back(kSubEnd);
  }
  local.faces = nf;
  if (stats) *stats = local;
  return seq;
}

QuantizedMesh amt_decode(const SymbolSequence& seq, DecodeMode mode, int bits) {
  const bool strict = mode == DecodeMode::Strict;
  bool terminated = true;
  const auto runs = split_runs(seq.symbols, terminated);
  if (!terminated && strict) throw DecodeError("AMT stream does not end with '&'");

  FaceSink sink(bits);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    auto run = runs[r];
    std::size_t n = run.size();
    for (std::size_t i = 0; i < run.size(); ++i) {
      if (!is_coordinate(run[i])) {
        if (strict) fail("non-coordinate symbol inside an AMT run", r);
        n = i;
        break;
      }
    }
    if (strict && n % 3 != 0) fail("AMT run length is not a multiple of 3", r);
    if (strict && n < 9) fail("AMT run shorter than one face", r);
    n -= n % 3;
    if (n < 9) continue;

    std::vector<std::uint32_t> verts;
    verts.reserve(n / 3);
    for (std::size_t i = 0; i < n; i += 3) verts.push_back(sink.add_vertex(&run[i]));
    sink.add_face(verts[0], verts[1], verts[2]);
    for (std::size_t j = 3; j < verts.size(); ++j) {
      const bool flip = (j - 2) % 2 == 1;
      if (flip) {
        sink.add_face(verts[j - 1], verts[j - 2], verts[j]);
      } else {
        sink.add_face(verts[j - 2], verts[j - 1], verts[j]);
      }
    }
  }
  return sink.finish();
}

SymbolSequence edr_encode(const QuantizedMesh& mesh, TraversalStats* stats) {
  return edr_encode(mesh, HalfEdgeMesh(mesh), stats);
}

SymbolSequence edr_encode(const QuantizedMesh& mesh, const HalfEdgeMesh& he,
                          TraversalStats* stats) {
  require_encodable(mesh);
  TraversalStats local;
  SymbolSequence seq{TokenizerKind::Edr, {}};
  const auto nf = static_cast<std::uint32_t>(mesh.faces.size());
  std::vector<bool> visited(nf, false);
  const auto open = [&](std::uint32_t h) {
    const auto t = he.twin(h);
    return t != kNoIndex && !visited[he.face(t)] ? t : kNoIndex;
  };

  std::uint32_t seed = 0;
  for (;;) {
    while (seed < nf && visited[seed]) ++seed;
    if (seed == nf) break;
    ++local.runs;
    visited[seed] = true;
    for (auto v : mesh.faces[seed]) emit_vertex(seq.symbols, mesh.vertices[v]);
    local.triples += 3;
    std::uint32_t h = 3 * seed;
    for (;;) {
      SymbolId dir = kDirN;
      auto t = open(he.next(h));
      if (t == kNoIndex) {
        dir = kDirP;
        t = open(he.prev(h));
      }
      if (t == kNoIndex) break;
      seq.symbols.push_back(dir);
      emit_vertex(seq.symbols, mesh.vertices[he.origin(he.prev(t))]);
      ++local.directions;
      ++local.triples;
      visited[he.face(t)] = true;
      h = t;
    }
    seq.symbols.push_back(kSubEnd);
  }
  local.faces = nf;
  if (stats) *stats = local;
  return seq;
}

QuantizedMesh edr_decode(const SymbolSequence& seq, DecodeMode mode, int bits) {
  const bool strict = mode == DecodeMode::Strict;
  bool terminated = true;
  const auto runs = split_runs(seq.symbols, terminated);
  if (!terminated && strict) throw DecodeError("EDR stream does not end with '&'");

  const auto coords_at = [](std::span<const SymbolId> run, std::size_t i) {
    return i + 3 <= run.size() && is_coordinate(run[i]) && is_coordinate(run[i + 1]) &&
           is_coordinate(run[i + 2]);
  };

  FaceSink sink(bits);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    auto run = runs[r];
    bool ok = true;
    for (std::size_t i = 0; i < 9; i += 3) ok = ok && coords_at(run, i);
    if (!ok) {
      if (strict) fail("EDR run does not start with a full face", r);
      continue;
    }
    // Current face (a, b, c) with current half-edge a->b.
    std::uint32_t a = sink.add_vertex(&run[0]);
    std::uint32_t b = sink.add_vertex(&run[3]);
    std::uint32_t c = sink.add_vertex(&run[6]);
    sink.add_face(a, b, c);
    std::size_t i = 9;
    while (i < run.size()) {
      const auto dir = run[i];
      if (!is_direction(dir)) {
        if (strict) fail("expected N or P in EDR run", r);
        break;
      }
      if (!coords_at(run, i + 1)) {
        if (strict) fail("direction symbol not followed by a vertex", r);
        break;
      }
      const auto v = sink.add_vertex(&run[i + 1]);
      if (dir == kDirN) {
        a = c;  // (c, b, v)
      } else {
        b = c;  // (a, c, v)
      }
      c = v;
      sink.add_face(a, b, c);
      i += 4;
    }
  }
  return sink.finish();
}

SymbolSequence encode(TokenizerKind kind, const QuantizedMesh& mesh, TraversalStats* stats) {
  switch (kind) {
    case TokenizerKind::Raw: {
      auto seq = raw_encode(mesh);
      if (stats) *stats = {mesh.faces.size(), 0, mesh.faces.size() * 3, 0};
      return seq;
    }
    case TokenizerKind::Amt: return amt_encode(mesh, stats);
    case TokenizerKind::Edr: return edr_encode(mesh, stats);
  }
  throw Error("unknown tokenizer kind");
}

QuantizedMesh decode(const SymbolSequence& seq, DecodeMode mode, int bits) {
  switch (seq.kind) {
    case TokenizerKind::Raw: return raw_decode(seq, mode, bits);
    case TokenizerKind::Amt: return amt_decode(seq, mode, bits);
    case TokenizerKind::Edr: return edr_decode(seq, mode, bits);
  }
  throw Error("unknown tokenizer kind");
}

}  // namespace meshtok
