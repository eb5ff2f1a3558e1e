#pragma once

#include <span>
#include <vector>

#include "meshtok/symbols.hpp"

namespace meshtok {

/// Stride-3 regrouping of one block: (x1 y1 z1 x2 y2 z2 ...) -> (x1 x2 .. y1 y2 .. z1 z2 ..).
/// Throws Error when the length is not a multiple of 3.
std::vector<SymbolId> rac_encode_block(std::span<const SymbolId> nums);

/// Inverse of rac_encode_block; trailing symbols beyond the last whole triple
/// are dropped.
std::vector<SymbolId> rac_decode_block(std::span<const SymbolId> nums);

/// Regroups every 9-symbol block independently; a final block of 3 or 6
/// symbols is regrouped on its own. Throws Error when the length is not a
/// multiple of 3.
std::vector<SymbolId> rac_encode_full(std::span<const SymbolId> nums);

/// Inverse of rac_encode_full. Input of any length is accepted: the final
/// partial block is cut down to 0, 3 or 6 symbols before decoding.
std::vector<SymbolId> rac_decode_full(std::span<const SymbolId> nums);

/// Tokenizer output after per-run regrouping. Within each run (delimited by
/// SUB_END, which never moves) EDR direction symbols come first, followed by
/// the run's coordinates in rac_encode_full order. RAW is a single run.
struct RearrangedSequence {
  TokenizerKind kind = TokenizerKind::Raw;
  std::vector<SymbolId> symbols;

  std::size_t size() const noexcept { return symbols.size(); }
  bool operator==(const RearrangedSequence&) const = default;
};

/// Throws DecodeError when a run's coordinate count is not a multiple of 3.
RearrangedSequence rearrange_sequence(const SymbolSequence& seq);

/// Exact inverse of rearrange_sequence. For EDR a run with D leading
/// directions must carry 9 + 3D coordinates; strict mode throws DecodeError
/// otherwise, lenient mode keeps the complete faces.
SymbolSequence unrearrange_sequence(const RearrangedSequence& seq,
                                    DecodeMode mode = DecodeMode::Strict);

}  // namespace meshtok
