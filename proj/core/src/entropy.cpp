#include "meshtok/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "meshtok/error.hpp"

namespace meshtok {

namespace {

double xlog2x_ratio(double weight, double ratio) {
  // weight * log2(ratio), with 0 * log 0 taken as 0.
  return weight == 0.0 ? 0.0 : weight * std::log2(ratio);
}

}  // namespace

void UnigramStats::add(std::uint32_t id, std::uint64_t n) {
  if (id >= counts_.size()) counts_.resize(static_cast<std::size_t>(id) + 1, 0);
  counts_[id] += n;
  total_ += n;
}

void UnigramStats::add(std::span<const std::uint32_t> ids) {
  for (auto id : ids) add(id);
}

void UnigramStats::merge(const UnigramStats& other) {
  if (other.counts_.size() > counts_.size()) counts_.resize(other.counts_.size(), 0);
  for (std::size_t i = 0; i < other.counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

double UnigramStats::probability(std::uint32_t id) const noexcept {
  return total_ ? static_cast<double>(count(id)) / static_cast<double>(total_) : 0.0;
}

std::size_t UnigramStats::distinct() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(counts_.begin(), counts_.end(), [](std::uint64_t c) { return c > 0; }));
}

double UnigramStats::entropy_bits() const {
  if (total_ == 0) return 0.0;
  const double n = static_cast<double>(total_);
  double h = 0.0;
  for (auto c : counts_) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double UnigramStats::information_bits() const {
  if (total_ == 0) return 0.0;
  const double n = static_cast<double>(total_);
  double info = 0.0;
  for (auto c : counts_) {
    if (c == 0) continue;
    info -= static_cast<double>(c) * std::log2(static_cast<double>(c) / n);
  }
  return info;
}

double compression_ratio(std::span<const std::size_t> symbol_lengths,
                         std::span<const std::size_t> raw_lengths) {
  if (symbol_lengths.size() != raw_lengths.size()) {
    throw Error("compression ratio needs one RAW length per mesh");
  }
  if (raw_lengths.empty()) throw Error("compression ratio of an empty corpus");
  std::uint64_t sym = 0;
  std::uint64_t raw = 0;
  for (std::size_t i = 0; i < raw_lengths.size(); ++i) {
    sym += symbol_lengths[i];
    raw += raw_lengths[i];
  }
  if (raw == 0) throw Error("compression ratio with zero RAW length");
  return static_cast<double>(sym) / static_cast<double>(raw);
}

double pcme(const UnigramStats& symbols, double c_r) { return symbols.entropy_bits() * c_r; }

double mean_token_length(const UnigramStats& tokens, std::span<const std::uint32_t> token_lengths) {
  if (tokens.total() == 0) return 0.0;
  double l = 0.0;
  const auto& counts = tokens.counts();
  for (std::size_t id = 0; id < counts.size(); ++id) {
    if (counts[id] == 0) continue;
    if (id >= token_lengths.size() || token_lengths[id] == 0) {
      throw Error("token " + std::to_string(id) + " has no expansion length");
    }
    l += tokens.probability(static_cast<std::uint32_t>(id)) * token_lengths[id];
  }
  return l;
}

double ptme(const UnigramStats& tokens, std::span<const std::uint32_t> token_lengths, double c_r) {
  if (tokens.total() == 0) return 0.0;
  return tokens.entropy_bits() / mean_token_length(tokens, token_lengths) * c_r;
}

double ptme_direct(const UnigramStats& tokens, std::uint64_t raw_length) {
  if (raw_length == 0) throw Error("PTME with zero RAW length");
  return tokens.information_bits() / static_cast<double>(raw_length);
}

MergeGain merge_gain(const UnigramStats& stats, std::uint64_t pair_count, std::uint32_t a,
                     std::uint32_t b) {
  MergeGain g;
  g.p_a = stats.probability(a);
  g.p_b = stats.probability(b);
  g.p_ab = stats.total() ? static_cast<double>(pair_count) / static_cast<double>(stats.total()) : 0.0;
  g.self_pair = a == b;
  const std::uint64_t need = g.self_pair ? 2 * pair_count : pair_count;
  if (pair_count == 0 || stats.count(a) < need || stats.count(b) < pair_count) {
    throw Error("merge gain needs 0 < p_ab <= min(p_a, p_b)");
  }
  const double p = g.p_ab;
  g.pmi = std::log2(p / (g.p_a * g.p_b));
  g.f_star = p * (g.pmi - std::numbers::log2e);
  const double rest = -(1.0 - p) * std::log2(1.0 - p);
  if (g.self_pair) {
    const double left = g.p_a - 2.0 * p;
    g.f_ab = p * g.pmi + rest + xlog2x_ratio(left, 1.0 - 2.0 * p / g.p_a);
  } else {
    g.f_ab = p * g.pmi + rest + xlog2x_ratio(g.p_a - p, 1.0 - p / g.p_a) +
             xlog2x_ratio(g.p_b - p, 1.0 - p / g.p_b);
  }
  return g;
}

TokenLengthHistogram token_length_histogram(std::span<const TokenSequence> corpus,
                                            const MergeVocabulary& vocab) {
  // Per-id summary first; the corpus pass is then a lookup.
  const auto n = vocab.size();
  std::vector<std::uint32_t> coords(n);
  std::vector<std::uint32_t> controls(n);
  for (TokenId id = 0; id < n; ++id) {
    for (auto s : vocab.expansion(id)) {
      if (is_coordinate(s)) {
        ++coords[id];
      } else {
        ++controls[id];
      }
    }
  }
  TokenLengthHistogram h;
  for (const auto& seq : corpus) {
    for (auto id : seq.ids) {
      if (id >= n) throw Error("unknown token id " + std::to_string(id));
      ++h.by_coordinates[coords[id]];
      ++h.tokens;
      h.coordinates += coords[id];
      h.control_symbols += controls[id];
      h.tokens_with_controls += controls[id] > 0;
      h.max_expansion = std::max<std::size_t>(h.max_expansion, coords[id] + controls[id]);
      h.max_coordinates = std::max<std::size_t>(h.max_coordinates, coords[id]);
    }
  }
  return h;
}

std::size_t usable_count(std::span<const std::size_t> token_lengths, std::size_t context_window) {
  return static_cast<std::size_t>(std::count_if(
      token_lengths.begin(), token_lengths.end(),
      [&](std::size_t len) { return len <= context_window && context_window > 0; }));
}

EntropyReport analyze(std::string method, std::span<const std::size_t> raw_lengths,
                      const std::vector<std::vector<SymbolId>>& symbols,
                      std::span<const TokenSequence> tokens, const MergeVocabulary& vocab,
                      std::size_t context_window) {
  if (raw_lengths.size() != symbols.size() || symbols.size() != tokens.size()) {
    throw Error("analyze: per-mesh inputs differ in length");
  }
  EntropyReport r;
  r.method = std::move(method);
  r.meshes = raw_lengths.size();
  r.vocab_size = vocab.size();
  r.context_window = context_window;

  const auto lengths = vocab.token_lengths();
  UnigramStats symbol_stats;
  UnigramStats token_stats;
  std::vector<std::size_t> symbol_lengths;
  std::vector<std::size_t> token_lengths;
  symbol_lengths.reserve(r.meshes);
  token_lengths.reserve(r.meshes);
  r.per_mesh.reserve(r.meshes);
  for (std::size_t i = 0; i < r.meshes; ++i) {
    const UnigramStats mesh_symbols(symbols[i]);
    const UnigramStats mesh_tokens(tokens[i].ids);
    symbol_stats.merge(mesh_symbols);
    token_stats.merge(mesh_tokens);
    symbol_lengths.push_back(symbols[i].size());
    token_lengths.push_back(tokens[i].size());
    r.raw_length += raw_lengths[i];
    r.symbol_length += symbols[i].size();
    r.token_length += tokens[i].size();

    MeshEntropy m;
    m.raw_length = raw_lengths[i];
    m.symbol_length = symbols[i].size();
    m.token_length = tokens[i].size();
    if (m.raw_length > 0) {
      m.compression_ratio = static_cast<double>(m.symbol_length) / static_cast<double>(m.raw_length);
      m.ptme = ptme(mesh_tokens, lengths, m.compression_ratio);
    }
    r.per_mesh.push_back(m);
  }

  if (r.raw_length > 0) {
    r.compression_ratio = compression_ratio(symbol_lengths, raw_lengths);
    r.token_compression_ratio = compression_ratio(token_lengths, raw_lengths);
    r.ptme_direct = ptme_direct(token_stats, r.raw_length);
  }
  r.coordinate_entropy = symbol_stats.entropy_bits();
  r.token_entropy = token_stats.entropy_bits();
  r.mean_token_length = mean_token_length(token_stats, lengths);
  r.pcme = pcme(symbol_stats, r.compression_ratio);
  r.ptme = ptme(token_stats, lengths, r.compression_ratio);
  r.histogram = token_length_histogram(tokens, vocab);
  r.usable = usable_count(token_lengths, context_window);
  return r;
}

}  // namespace meshtok
