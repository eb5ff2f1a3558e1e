#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "meshtok/geom_metrics.hpp"
#include "meshtok/mesh.hpp"
#include "meshtok/symbols.hpp"
#include "meshtok/vocab.hpp"

namespace meshtok {

/// A tokenizer configuration: base tokenizer, optional RAC, optional merges.
struct Method {
  TokenizerKind tokenizer = TokenizerKind::Edr;
  bool rearrange = false;
  bool merge = false;
  std::size_t vocab_size = kDefaultVocabSize;  ///< used only with `merge`

  /// "EDR", "EDR + RAC", "EDR + MC", "EDR + RMC".
  std::string name() const;
  /// File-system friendly, e.g. "edr-rmc-8192".
  std::string id() const;
  bool operator==(const Method&) const = default;
};

/// The twelve table rows: each tokenizer plain, + MC, + RAC, + RMC.
std::vector<Method> table_methods(std::size_t vocab_size = kDefaultVocabSize);

/// Tokenizer output, rearranged when requested: the line a vocabulary is
/// trained on.
std::vector<SymbolId> serialize(const QuantizedMesh& mesh, TokenizerKind kind, bool rearrange);

/// Inverse of serialize().
QuantizedMesh deserialize(std::span<const SymbolId> symbols, TokenizerKind kind, bool rearrange,
                          DecodeMode mode = DecodeMode::Strict, int bits = kDefaultBits);

/// Throws Error when `vocab` was trained for another tokenizer or ordering.
void check_vocab(const MergeVocabulary& vocab, TokenizerKind kind, bool rearrange);

/// Full encode. A null `vocab` means the identity vocabulary.
TokenSequence encode_tokens(const QuantizedMesh& mesh, TokenizerKind kind, bool rearrange,
                            const MergeVocabulary* vocab);

QuantizedMesh decode_tokens(const TokenSequence& tokens, TokenizerKind kind, bool rearrange,
                            const MergeVocabulary* vocab, DecodeMode mode = DecodeMode::Strict,
                            int bits = kDefaultBits);

/// Reference side of a round-trip check, built once and reused across methods.
class RoundTripReference {
 public:
  RoundTripReference(QuantizedMesh mesh, std::size_t sample_points, std::uint64_t seed);

  const QuantizedMesh& mesh() const noexcept { return mesh_; }
  const PointCloud& cloud() const noexcept { return cloud_; }
  std::size_t sample_points() const noexcept { return sample_points_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Samples `decoded` with the same seed and measures both set distances.
  SetDistances compare(const QuantizedMesh& decoded) const;

 private:
  QuantizedMesh mesh_;
  std::size_t sample_points_;
  std::uint64_t seed_;
  PointCloud cloud_;
  KdTree tree_;
};

struct RoundTripResult {
  bool identical = false;      ///< decoded mesh equals the canonical input, windings included
  bool same_face_set = false;  ///< equal as unordered vertex triples
  std::size_t decoded_faces = 0;
  SetDistances distances;
};

/// Equal vertex lists and equal faces as unordered triples.
bool same_face_set(const QuantizedMesh& a, const QuantizedMesh& b);

RoundTripResult roundtrip(const RoundTripReference& reference, const Method& method,
                          const MergeVocabulary* vocab);

}  // namespace meshtok
