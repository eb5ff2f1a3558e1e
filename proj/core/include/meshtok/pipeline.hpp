#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meshtok/entropy.hpp"
#include "meshtok/mesh.hpp"
#include "meshtok/symbols.hpp"
#include "meshtok/vocab.hpp"

namespace meshtok {

inline constexpr std::size_t kDefaultContextWindow = 9000;
/// Environment variable naming the tokenization cache directory.
inline constexpr const char* kCacheDirEnv = "MESHTOK_CACHE_DIR";

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). The first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

struct CorpusFile {
  std::string name;  ///< file name relative to the corpus directory
  std::string sha256;
  QuantizedMesh mesh;
  CleanupCounts cleanup;
};

struct SkippedFile {
  std::string name;
  std::string reason;
};

struct LoadedCorpus {
  std::vector<CorpusFile> files;    ///< sorted by name
  std::vector<SkippedFile> skipped;
  std::string fingerprint;          ///< hash over every input file, including skipped ones

  std::size_t total() const noexcept { return files.size() + skipped.size(); }
};

/// Every `*.obj` directly inside `dir`, in name order. Unparseable files and
/// meshes left without faces after quantization are skipped with a reason.
/// Throws Error when `dir` is not a readable directory.
LoadedCorpus load_corpus(const std::filesystem::path& dir, int bits = kDefaultBits,
                         std::size_t threads = 0);

/// Stable "<name>.txt"-style list of corpus OBJ paths, sorted.
std::vector<std::filesystem::path> list_obj_files(const std::filesystem::path& dir);

struct PipelineConfig {
  TokenizerKind tokenizer = TokenizerKind::Edr;
  bool rearrange = false;
  std::filesystem::path vocab_path;  ///< empty: identity vocabulary
  int bits = kDefaultBits;
  std::size_t context_window = kDefaultContextWindow;
  std::size_t threads = 0;
  /// Tokenization cache; empty falls back to $MESHTOK_CACHE_DIR, then to no cache.
  std::filesystem::path cache_dir;
  std::function<void(const std::string&)> log;  ///< receives skip notices

  /// "<tokenizer>[-rac]-b<bits>-w<window>[-v<vocab hash prefix>]".
  std::string config_id(std::string_view vocab_hash = {}) const;
};

struct ManifestEntry {
  std::string path;
  std::string sha256;
  std::size_t faces = 0;
  std::size_t raw_length = 0;
  std::size_t symbol_length = 0;
  std::size_t token_length = 0;
};

struct CorpusManifest {
  std::string config_id;
  std::string fingerprint;
  TokenizerKind tokenizer = TokenizerKind::Edr;
  bool rearrange = false;
  std::string vocab_file;    ///< file name only, empty for the identity vocabulary
  std::string vocab_sha256;
  std::size_t vocab_size = 0;
  int bits = kDefaultBits;
  std::size_t context_window = kDefaultContextWindow;
  std::vector<ManifestEntry> meshes;
  std::vector<SkippedFile> skipped;

  std::size_t processed() const noexcept { return meshes.size(); }
  std::size_t total() const noexcept { return meshes.size() + skipped.size(); }
};

struct PipelineResult {
  CorpusManifest manifest;
  EntropyReport report;
  std::filesystem::path output_dir;  ///< <out_root>/<config id>
  std::size_t cache_hits = 0;
};

/// Quantize, tokenize, optionally rearrange and merge every mesh of
/// `corpus_dir`, then write `<out_root>/<config id>/tokens/<stem>.txt`,
/// `manifest.json` and `report.json`. Token files hold base symbols for the
/// identity vocabulary and token ids otherwise. Outputs depend only on the
/// input bytes and the configuration.
///
/// Throws Error for an unreadable directory and ParseError for an invalid
/// vocabulary file.
PipelineResult run_pipeline(const std::filesystem::path& corpus_dir, const PipelineConfig& config,
                            const std::filesystem::path& out_root);

std::string manifest_json(const CorpusManifest& manifest);

}  // namespace meshtok
