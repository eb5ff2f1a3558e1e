#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "meshtok/codec.hpp"
#include "meshtok/pipeline.hpp"
#include "meshtok/report.hpp"

namespace meshtok {

struct CompareOptions {
  std::size_t vocab_size = kDefaultVocabSize;
  std::size_t context_window = kDefaultContextWindow;
  std::size_t max_training_meshes = 10000;  ///< vocabularies learn from the first N meshes
  bool sweep = true;                        ///< vocab-size series over kVocabSweep
  bool roundtrip = false;                   ///< measure round-trip CD/HD per row
  std::size_t sample_points = kDefaultSamplePoints;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  /// When set, vocabularies are loaded from `<dir>/<method id>.json` if
  /// present and saved there after training otherwise.
  std::filesystem::path vocab_dir;
  std::function<void(const std::string&)> log;
};

struct CompareResult {
  std::vector<TableRow> rows;     ///< table_methods() order
  std::vector<SweepPoint> sweep;  ///< MC and RMC rows per vocabulary size
  /// Trained vocabularies keyed by Method::id() of the merged rows.
  std::map<std::string, MergeVocabulary> vocabularies;
};

/// All twelve configurations over one loaded corpus. Each merged ordering is
/// trained once at `vocab_size`; sweep points use prefixes of that rule list.
CompareResult compare(const LoadedCorpus& corpus, const CompareOptions& options = {});

/// Tokenizer lines of every mesh, rearranged when requested.
std::vector<std::vector<SymbolId>> serialize_corpus(const LoadedCorpus& corpus, TokenizerKind kind,
                                                    bool rearrange, std::size_t threads = 0);

/// Merged sequences and report for one method over precomputed lines.
EntropyReport evaluate(const Method& method, std::span<const std::size_t> raw_lengths,
                       const std::vector<std::vector<SymbolId>>& lines,
                       const MergeVocabulary& vocab, std::size_t context_window,
                       std::size_t threads = 0);

}  // namespace meshtok
