#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace meshtok {

using SymbolId = std::uint32_t;

enum class TokenizerKind { Raw, Amt, Edr };

/// Coordinate values occupy ids 0..127; control symbols follow.
inline constexpr SymbolId kCoordinateCount = 128;
inline constexpr SymbolId kSubEnd = 128;  ///< "&", ends an AMT/EDR run
inline constexpr SymbolId kDirN = 129;    ///< "N", EDR: cross the next edge
inline constexpr SymbolId kDirP = 130;    ///< "P", EDR: cross the previous edge

constexpr std::size_t alphabet_size(TokenizerKind kind) noexcept {
  switch (kind) {
    case TokenizerKind::Raw: return 128;
    case TokenizerKind::Amt: return 129;
    case TokenizerKind::Edr: return 131;
  }
  return 0;
}

static_assert(alphabet_size(TokenizerKind::Raw) == 128);
static_assert(alphabet_size(TokenizerKind::Amt) == 129);
static_assert(alphabet_size(TokenizerKind::Edr) == 131);

constexpr bool is_coordinate(SymbolId s) noexcept { return s < kCoordinateCount; }
constexpr bool is_direction(SymbolId s) noexcept { return s == kDirN || s == kDirP; }

std::string_view to_string(TokenizerKind kind) noexcept;
/// Accepts "raw", "amt", "edr" (case-insensitive).
std::optional<TokenizerKind> parse_tokenizer_kind(std::string_view name);

/// Lossless output of a mesh tokenizer.
struct SymbolSequence {
  TokenizerKind kind = TokenizerKind::Raw;
  std::vector<SymbolId> symbols;

  std::size_t size() const noexcept { return symbols.size(); }
  bool operator==(const SymbolSequence&) const = default;
};

enum class DecodeMode {
  Strict,   ///< any malformation throws DecodeError
  Lenient,  ///< malformed runs are truncated to their last complete face
};

/// Whitespace-separated: integers 0..127 and the literals `&`, `N`, `P`.
std::string format_symbols(std::span<const SymbolId> symbols);
/// Throws ParseError on unknown literals or ids outside the alphabet of `kind`.
std::vector<SymbolId> parse_symbols(std::string_view line, TokenizerKind kind);

/// Whitespace-separated integer token ids.
std::string format_ids(std::span<const std::uint32_t> ids);
std::vector<std::uint32_t> parse_ids(std::string_view line);

}  // namespace meshtok
