#pragma once

#include <cstddef>

#include "meshtok/mesh.hpp"
#include "meshtok/symbols.hpp"

namespace meshtok {

/// Counters filled by the traversal encoders.
struct TraversalStats {
  std::size_t faces = 0;
  std::size_t runs = 0;        ///< subsequences, one SUB_END each (AMT/EDR)
  std::size_t triples = 0;     ///< vertex coordinate triples emitted
  std::size_t directions = 0;  ///< N/P symbols emitted (EDR)
};

/// Per-face (x1 y1 z1 x2 y2 z2 x3 y3 z3) in canonical face order.
SymbolSequence raw_encode(const QuantizedMesh& mesh);

/// Rebuilds faces nine symbols at a time. Faces with repeated positions are
/// dropped and counted in `dropped` (when non-null).
/// Strict mode throws DecodeError when the length is not a multiple of 9 or a
/// symbol is not a coordinate; lenient mode drops the incomplete tail.
QuantizedMesh raw_decode(const SymbolSequence& seq, DecodeMode mode = DecodeMode::Strict,
                         int bits = kDefaultBits, std::size_t* dropped = nullptr);

/// Greedy strip walk: each extension crosses the interior edge formed by the
/// two most recently emitted vertices and emits the neighbor's third vertex.
/// Runs start at the lowest unvisited face and end with SUB_END.
SymbolSequence amt_encode(const QuantizedMesh& mesh, const EdgeAdjacency& adjacency,
                          TraversalStats* stats = nullptr);
SymbolSequence amt_encode(const QuantizedMesh& mesh, TraversalStats* stats = nullptr);

/// Every second extension face of a run is emitted with flipped winding, so a
/// consistently wound mesh decodes with its original orientation.
QuantizedMesh amt_decode(const SymbolSequence& seq, DecodeMode mode = DecodeMode::Strict,
                         int bits = kDefaultBits);

/// Half-edge walk with direction symbols.
///
/// The current half-edge of a seed face (v1, v2, v3) is v1->v2. From the
/// current face with half-edge h, N crosses twin(next(h)) and P crosses
/// twin(prev(h)); N is tried first. After a crossing the crossed twin becomes
/// h, and the vertex opposite it is emitted after the direction symbol. Only
/// twin-linked (consistently wound, two-face) edges are crossed.
SymbolSequence edr_encode(const QuantizedMesh& mesh, const HalfEdgeMesh& half_edges,
                          TraversalStats* stats = nullptr);
SymbolSequence edr_encode(const QuantizedMesh& mesh, TraversalStats* stats = nullptr);

/// Replays the walk: with current face (a, b, c) and h = a->b, N attaches
/// (c, b, r) and P attaches (a, c, r). Windings therefore match the encoder's
/// input exactly.
QuantizedMesh edr_decode(const SymbolSequence& seq, DecodeMode mode = DecodeMode::Strict,
                         int bits = kDefaultBits);

/// Dispatch on `kind`.
SymbolSequence encode(TokenizerKind kind, const QuantizedMesh& mesh,
                      TraversalStats* stats = nullptr);
QuantizedMesh decode(const SymbolSequence& seq, DecodeMode mode = DecodeMode::Strict,
                     int bits = kDefaultBits);

}  // namespace meshtok
