#include "meshtok/compare.hpp"

#include <algorithm>
#include <limits>
#include <mutex>

#include "meshtok/error.hpp"

namespace meshtok {

namespace {

MergeVocabulary obtain_vocab(const Method& method, const std::vector<std::vector<SymbolId>>& lines,
                             const CompareOptions& options) {
  std::filesystem::path file;
  if (!options.vocab_dir.empty()) {
    file = options.vocab_dir / (method.id() + ".json");
    std::error_code ec;
    if (std::filesystem::is_regular_file(file, ec)) {
      auto vocab = load(file);
      check_vocab(vocab, method.tokenizer, method.rearrange);
      if (vocab.target_size() == method.vocab_size) {
        if (options.log) options.log("loaded " + file.string());
        return vocab;
      }
    }
  }
  const std::size_t n = std::min(lines.size(), options.max_training_meshes);
  const std::vector<std::vector<SymbolId>> training(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(n));
  if (options.log) options.log("training " + method.name() + " on " + std::to_string(n) + " meshes");
  auto vocab = train(training, method.tokenizer, method.rearrange, method.vocab_size);
  if (!file.empty()) save(vocab, file);
  return vocab;
}

}  // namespace

std::vector<std::vector<SymbolId>> serialize_corpus(const LoadedCorpus& corpus, TokenizerKind kind,
                                                    bool rearrange, std::size_t threads) {
  std::vector<std::vector<SymbolId>> lines(corpus.files.size());
  parallel_for(lines.size(), threads,
               [&](std::size_t i) { lines[i] = serialize(corpus.files[i].mesh, kind, rearrange); });
  return lines;
}

EntropyReport evaluate(const Method& method, std::span<const std::size_t> raw_lengths,
                       const std::vector<std::vector<SymbolId>>& lines, const MergeVocabulary& vocab,
                       std::size_t context_window, std::size_t threads) {
  std::vector<TokenSequence> tokens(lines.size());
  parallel_for(lines.size(), threads,
               [&](std::size_t i) { tokens[i] = meshtok::apply(vocab, lines[i]); });
  return analyze(method.name(), raw_lengths, lines, tokens, vocab, context_window);
}

CompareResult compare(const LoadedCorpus& corpus, const CompareOptions& options) {
  if (corpus.files.empty()) throw Error("compare needs at least one mesh");
  std::vector<std::size_t> raw_lengths;
  raw_lengths.reserve(corpus.files.size());
  for (const auto& f : corpus.files) raw_lengths.push_back(9 * f.mesh.faces.size());

  CompareResult result;
  const auto methods = table_methods(options.vocab_size);
  result.rows.resize(methods.size());

  std::map<std::pair<TokenizerKind, bool>, std::vector<std::vector<SymbolId>>> lines;
  for (const auto& m : methods) {
    auto key = std::make_pair(m.tokenizer, m.rearrange);
    if (!lines.contains(key)) lines[key] = serialize_corpus(corpus, m.tokenizer, m.rearrange, options.threads);
  }

  for (std::size_t r = 0; r < methods.size(); ++r) {
    const auto& m = methods[r];
    const auto& l = lines.at({m.tokenizer, m.rearrange});
    if (!m.merge) {
      result.rows[r].report = evaluate(m, raw_lengths, l, MergeVocabulary(m.tokenizer, m.rearrange),
                                       options.context_window, options.threads);
      continue;
    }
    auto vocab = obtain_vocab(m, l, options);
    result.rows[r].report = evaluate(m, raw_lengths, l, vocab, options.context_window, options.threads);
    if (options.sweep) {
      for (auto size : kVocabSweep) {
        if (size > options.vocab_size) break;
        const auto rep = size == options.vocab_size
                             ? result.rows[r].report
                             : evaluate(m, raw_lengths, l, vocab.truncated(size),
                                        options.context_window, options.threads);
        result.sweep.push_back({m.name(), size, rep.token_compression_ratio, rep.ptme,
                                rep.histogram.mean_coordinates(), rep.usable, rep.meshes});
      }
    }
    result.vocabularies.emplace(m.id(), std::move(vocab));
  }

  if (options.roundtrip) {
    std::vector<SetDistances> worst(methods.size());
    std::vector<std::size_t> failures(methods.size(), 0);
    std::mutex mutex;
    parallel_for(corpus.files.size(), options.threads, [&](std::size_t i) {
      const RoundTripReference ref(corpus.files[i].mesh, options.sample_points, options.seed);
      std::vector<RoundTripResult> local;
      local.reserve(methods.size());
      for (const auto& m : methods) {
        const MergeVocabulary* v = m.merge ? &result.vocabularies.at(m.id()) : nullptr;
        try {
          local.push_back(roundtrip(ref, m, v));
        } catch (const std::exception&) {
          local.push_back({false, false, 0, {std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity()}});
        }
      }
      std::lock_guard lock(mutex);
      for (std::size_t r = 0; r < methods.size(); ++r) {
        worst[r].chamfer = std::max(worst[r].chamfer, local[r].distances.chamfer);
        worst[r].hausdorff = std::max(worst[r].hausdorff, local[r].distances.hausdorff);
        failures[r] += !local[r].same_face_set;
      }
    });
    for (std::size_t r = 0; r < methods.size(); ++r) {
      result.rows[r].roundtrip = worst[r];
      result.rows[r].roundtrip_failures = failures[r];
    }
  }
  return result;
}

}  // namespace meshtok
