#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "meshtok/rearrange.hpp"
#include "meshtok/symbols.hpp"

namespace meshtok {

using TokenId = std::uint32_t;

inline constexpr std::size_t kDefaultVocabSize = 8192;
inline constexpr int kVocabFormatVersion = 1;

/// Vocabulary sizes swept when reporting compression against vocab size.
inline constexpr std::size_t kVocabSweep[] = {256, 512, 1024, 2048, 4096, 8192};

struct MergeRule {
  TokenId left = 0;
  TokenId right = 0;
  std::uint64_t frequency = 0;  ///< replacements made when the rule was learned

  bool operator==(const MergeRule&) const = default;
};

/// Token ids after merging. Expands back to the symbol sequence it came from.
struct TokenSequence {
  std::vector<TokenId> ids;

  std::size_t size() const noexcept { return ids.size(); }
  bool operator==(const TokenSequence&) const = default;
};

/// Ordered BPE merge rules over a tokenizer's base alphabet.
///
/// Ids below base_size() are the atomic symbols; rule i creates id
/// base_size() + i whose expansion is the concatenation of its parents'.
/// Expansions are unique.
class MergeVocabulary {
 public:
  /// Identity vocabulary (no rules).
  explicit MergeVocabulary(TokenizerKind kind, bool rearranged = false,
                           std::size_t target_size = 0);

  TokenizerKind kind() const noexcept { return kind_; }
  bool rearranged() const noexcept { return rearranged_; }
  std::size_t base_size() const noexcept { return base_; }
  std::size_t size() const noexcept { return base_ + rules_.size(); }
  /// Size requested at training time; equals size() unless pair
  /// frequencies ran out first.
  std::size_t target_size() const noexcept { return target_size_; }
  const std::vector<MergeRule>& rules() const noexcept { return rules_; }

  /// Appends a rule and returns the new id. Throws Error when an operand is
  /// not yet defined or the expansion already exists.
  TokenId add_rule(TokenId left, TokenId right, std::uint64_t frequency = 0);

  /// Rank of the rule merging (left, right), if any.
  std::optional<std::uint32_t> rank(TokenId left, TokenId right) const;

  bool contains_expansion(std::span<const SymbolId> symbols) const;

  /// Throws Error for an unknown id.
  std::span<const SymbolId> expansion(TokenId id) const;
  std::size_t token_length(TokenId id) const { return expansion(id).size(); }
  /// Expansion length of every id, indexed by id.
  std::vector<std::uint32_t> token_lengths() const;

  /// The first `target_size - base_size()` rules.
  MergeVocabulary truncated(std::size_t target_size) const;

  bool operator==(const MergeVocabulary& other) const;

 private:
  TokenizerKind kind_;
  bool rearranged_;
  std::size_t base_;
  std::size_t target_size_;
  std::vector<MergeRule> rules_;
  std::vector<SymbolId> flat_;         // all expansions back to back
  std::vector<std::size_t> offsets_;   // size() + 1 entries
  std::unordered_map<std::uint64_t, std::uint32_t> ranks_;
  std::unordered_map<std::string, TokenId> by_expansion_;
};

/// Classic BPE over whole lines (one mesh per line, no pair crosses lines).
///
/// Each step merges the most frequent adjacent pair, counting non-overlapping
/// left-to-right replacements; ties go to the smaller (left, right). Stops at
/// `target_size` or when no pair occurs at least twice. A pair whose
/// expansion already exists is skipped. Control symbols merge like any atom.
///
/// Throws Error when the corpus is empty, `target_size` is below the base
/// alphabet, or a symbol is outside it.
MergeVocabulary train(const std::vector<std::vector<SymbolId>>& lines, TokenizerKind kind,
                      bool rearranged, std::size_t target_size);
MergeVocabulary train(const std::vector<SymbolSequence>& corpus, std::size_t target_size);
MergeVocabulary train(const std::vector<RearrangedSequence>& corpus, std::size_t target_size);

/// Applies rules by priority (lowest rank first, left to right within a
/// rank), which reproduces the training segmentation exactly.
/// Throws Error for a symbol outside the base alphabet.
TokenSequence apply(const MergeVocabulary& vocab, std::span<const SymbolId> symbols);

/// Concatenated expansions. Throws Error for an unknown id.
std::vector<SymbolId> expand(const MergeVocabulary& vocab, const TokenSequence& tokens);

std::string to_json(const MergeVocabulary& vocab);
/// Throws ParseError for malformed JSON, a version or base-size mismatch, or a
/// rule that references an id not yet defined.
MergeVocabulary vocab_from_json(std::string_view text);

void save(const MergeVocabulary& vocab, const std::filesystem::path& path);
MergeVocabulary load(const std::filesystem::path& path);

}  // namespace meshtok
