#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "meshtok/vocab.hpp"

namespace meshtok {

/// Occurrence counts of symbols or tokens, indexed by id.
class UnigramStats {
 public:
  UnigramStats() = default;
  explicit UnigramStats(std::span<const std::uint32_t> ids) { add(ids); }

  void add(std::uint32_t id, std::uint64_t n = 1);
  void add(std::span<const std::uint32_t> ids);
  /// Associative; order of merging never changes the result.
  void merge(const UnigramStats& other);

  std::uint64_t count(std::uint32_t id) const noexcept {
    return id < counts_.size() ? counts_[id] : 0;
  }
  std::uint64_t total() const noexcept { return total_; }
  double probability(std::uint32_t id) const noexcept;
  /// Number of ids with a non-zero count.
  std::size_t distinct() const noexcept;
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  /// -sum p log2 p, in bits. Zero-count ids contribute nothing.
  double entropy_bits() const;
  /// -sum N log2 p: total information of the counted sequence, in bits.
  double information_bits() const;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Sum of tokenizer lengths over sum of RAW lengths, over the same meshes.
/// Throws Error for mismatched or empty inputs or a zero RAW total.
double compression_ratio(std::span<const std::size_t> symbol_lengths,
                         std::span<const std::size_t> raw_lengths);

/// H_c * C_R with H_c the unigram entropy of `symbols` in bits.
double pcme(const UnigramStats& symbols, double c_r);

/// Mean expansion length l = sum p_s l_s. `token_lengths` is indexed by id.
double mean_token_length(const UnigramStats& tokens, std::span<const std::uint32_t> token_lengths);

/// (H_s / l) * C_R. Throws Error when a counted token has no length.
double ptme(const UnigramStats& tokens, std::span<const std::uint32_t> token_lengths, double c_r);

/// -sum_s N_s log2 p_s / raw_length: the same quantity as ptme(), computed
/// from token counts and the RAW length alone.
double ptme_direct(const UnigramStats& tokens, std::uint64_t raw_length);

/// Entropy change predicted for merging the adjacent pair (a, b).
///
/// `f_ab` is exact: with l the mean token length before merging,
/// H'/l' - H/l = -f_ab / l. `f_star` is the small-p_ab approximation
/// p_ab (PMI - log2 e) and `pmi` = log2(p_ab / (p_a p_b)); all in bits.
/// For a == b the exact form uses p_a - 2 p_ab for the leftover singles and
/// `self_pair` is set.
struct MergeGain {
  double f_ab = 0.0;
  double f_star = 0.0;
  double pmi = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  double p_ab = 0.0;
  bool self_pair = false;

  double predicted_delta(double mean_length) const { return -f_ab / mean_length; }
};

/// `pair_count` is the number of replacements the merge performs.
/// Throws Error unless p_a, p_b > 0 and 0 < p_ab <= min(p_a, p_b)
/// (2 p_ab <= p_a for a self pair).
MergeGain merge_gain(const UnigramStats& stats, std::uint64_t pair_count, std::uint32_t a,
                     std::uint32_t b);

/// Token occurrences bucketed by how many coordinates their expansion holds.
struct TokenLengthHistogram {
  std::map<std::size_t, std::uint64_t> by_coordinates;
  std::uint64_t tokens = 0;
  std::uint64_t coordinates = 0;
  std::uint64_t control_symbols = 0;          ///< control symbols inside token expansions
  std::uint64_t tokens_with_controls = 0;
  std::size_t max_expansion = 0;              ///< longest expansion seen, in base symbols
  std::size_t max_coordinates = 0;

  double mean_coordinates() const {
    return tokens ? static_cast<double>(coordinates) / static_cast<double>(tokens) : 0.0;
  }
};

TokenLengthHistogram token_length_histogram(std::span<const TokenSequence> corpus,
                                            const MergeVocabulary& vocab);

/// Meshes whose final token sequence fits in `context_window`.
std::size_t usable_count(std::span<const std::size_t> token_lengths, std::size_t context_window);

struct MeshEntropy {
  std::size_t raw_length = 0;
  std::size_t symbol_length = 0;
  std::size_t token_length = 0;
  double compression_ratio = 0.0;  ///< symbol_length / raw_length
  double ptme = 0.0;               ///< from this mesh's own unigram model
};

/// One configuration measured over a corpus with one pooled unigram model.
struct EntropyReport {
  std::string method;
  std::size_t meshes = 0;
  std::uint64_t raw_length = 0;
  std::uint64_t symbol_length = 0;
  std::uint64_t token_length = 0;
  double compression_ratio = 0.0;        ///< C_R = |Seq_c| / |Seq_R|
  double token_compression_ratio = 0.0;  ///< |Seq_s| / |Seq_R|, the "Compress Ratio" column
  double coordinate_entropy = 0.0;       ///< H_c, bits
  double token_entropy = 0.0;            ///< H_s, bits
  double mean_token_length = 0.0;        ///< l
  double pcme = 0.0;
  double ptme = 0.0;
  double ptme_direct = 0.0;
  std::size_t vocab_size = 0;
  std::size_t context_window = 0;
  std::size_t usable = 0;
  TokenLengthHistogram histogram;
  std::vector<MeshEntropy> per_mesh;
};

/// `symbols[i]` is mesh i's tokenizer output (rearranged or not),
/// `tokens[i]` its merged form under `vocab`, `raw_lengths[i]` its RAW length.
EntropyReport analyze(std::string method, std::span<const std::size_t> raw_lengths,
                      const std::vector<std::vector<SymbolId>>& symbols,
                      std::span<const TokenSequence> tokens, const MergeVocabulary& vocab,
                      std::size_t context_window);

}  // namespace meshtok
