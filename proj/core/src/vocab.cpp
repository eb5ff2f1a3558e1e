#include "meshtok/vocab.hpp"

#include <algorithm>
#include <queue>
#include <tuple>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "meshtok/error.hpp"
#include "meshtok/obj_io.hpp"

namespace meshtok {

namespace {

constexpr std::uint32_t kGone = 0xffffffffu;

std::uint64_t pair_key(TokenId a, TokenId b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

// Base alphabets stay below 256, so one byte per symbol is a faithful key.
std::string expansion_key(std::span<const SymbolId> s) {
  std::string key(s.size(), '\0');
  for (std::size_t i = 0; i < s.size(); ++i) key[i] = static_cast<char>(s[i]);
  return key;
}

}  // namespace

MergeVocabulary::MergeVocabulary(TokenizerKind kind, bool rearranged, std::size_t target_size)
    : kind_(kind),
      rearranged_(rearranged),
      base_(alphabet_size(kind)),
      target_size_(target_size == 0 ? alphabet_size(kind) : target_size) {
  offsets_.reserve(base_ + 1);
  offsets_.push_back(0);
  for (SymbolId s = 0; s < base_; ++s) {
    flat_.push_back(s);
    offsets_.push_back(flat_.size());
    by_expansion_.emplace(expansion_key({&s, 1}), s);
  }
}

TokenId MergeVocabulary::add_rule(TokenId left, TokenId right, std::uint64_t frequency) {
  if (left >= size() || right >= size()) {
    throw Error("merge rule (" + std::to_string(left) + ", " + std::to_string(right) +
                ") references an undefined token");
  }
  const auto l = expansion(left);
  const auto r = expansion(right);
  std::vector<SymbolId> joined(l.begin(), l.end());
  joined.insert(joined.end(), r.begin(), r.end());
  auto key = expansion_key(joined);
  if (by_expansion_.count(key)) {
    throw Error("merge rule (" + std::to_string(left) + ", " + std::to_string(right) +
                ") duplicates an existing token");
  }
  const auto id = static_cast<TokenId>(size());
  ranks_.emplace(pair_key(left, right), static_cast<std::uint32_t>(rules_.size()));
  by_expansion_.emplace(std::move(key), id);
  rules_.push_back({left, right, frequency});
  flat_.insert(flat_.end(), joined.begin(), joined.end());
  offsets_.push_back(flat_.size());
  target_size_ = std::max(target_size_, size());
  return id;
}

std::optional<std::uint32_t> MergeVocabulary::rank(TokenId left, TokenId right) const {
  const auto it = ranks_.find(pair_key(left, right));
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

bool MergeVocabulary::contains_expansion(std::span<const SymbolId> symbols) const {
  return by_expansion_.count(expansion_key(symbols)) != 0;
}

std::span<const SymbolId> MergeVocabulary::expansion(TokenId id) const {
  if (id >= size()) throw Error("unknown token id " + std::to_string(id));
  return std::span<const SymbolId>(flat_).subspan(offsets_[id], offsets_[id + 1] - offsets_[id]);
}

std::vector<std::uint32_t> MergeVocabulary::token_lengths() const {
  std::vector<std::uint32_t> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint32_t>(offsets_[i + 1] - offsets_[i]);
  }
  return out;
}

MergeVocabulary MergeVocabulary::truncated(std::size_t target_size) const {
  if (target_size < base_) throw Error("target size below the base alphabet");
  MergeVocabulary out(kind_, rearranged_, target_size);
  const auto keep = std::min(rules_.size(), target_size - base_);
  for (std::size_t i = 0; i < keep; ++i) out.add_rule(rules_[i].left, rules_[i].right, rules_[i].frequency);
  out.target_size_ = target_size;
  return out;
}

bool MergeVocabulary::operator==(const MergeVocabulary& other) const {
  return kind_ == other.kind_ && rearranged_ == other.rearranged_ &&
         target_size_ == other.target_size_ && rules_ == other.rules_;
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct PairStat {
  std::uint64_t count = 0;  // overlapping occurrences currently present
  std::uint64_t version = 0;  // stamp of the last change
  std::vector<std::uint32_t> where;  // left positions; may hold stale entries
};

struct Candidate {
  std::uint64_t count;
  TokenId left;
  TokenId right;
  std::uint64_t version;
  bool exact;  // count already reflects non-overlapping replacement
};

struct CandidateOrder {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.count != b.count) return a.count < b.count;
    return std::tie(a.left, a.right) > std::tie(b.left, b.right);
  }
};

class BpeTrainer {
 public:
  BpeTrainer(const std::vector<std::vector<SymbolId>>& lines, std::size_t base) {
    std::size_t total = 0;
    for (const auto& l : lines) total += l.size();
    tok_.reserve(total);
    prev_.reserve(total);
    next_.reserve(total);
    for (const auto& line : lines) {
      const auto start = static_cast<std::uint32_t>(tok_.size());
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] >= base) {
          throw Error("symbol " + std::to_string(line[i]) + " outside the base alphabet");
        }
        const auto pos = static_cast<std::uint32_t>(tok_.size());
        tok_.push_back(line[i]);
        prev_.push_back(i == 0 ? kGone : pos - 1);
        next_.push_back(i + 1 == line.size() ? kGone : pos + 1);
      }
      for (std::uint32_t p = start; p + 1 < tok_.size(); ++p) increment(tok_[p], tok_[p + 1], p);
    }
    flush_touched();
  }

  void run(MergeVocabulary& vocab, std::size_t target_size) {
    while (vocab.size() < target_size && !heap_.empty()) {
      const Candidate top = heap_.top();
      heap_.pop();
      const auto key = pair_key(top.left, top.right);
      if (banned_.count(key)) continue;
      const auto it = pairs_.find(key);
      if (it == pairs_.end() || it->second.version != top.version) continue;
      if (top.left == top.right && !top.exact) {
        const auto exact = non_overlapping_count(top.left, it->second);
        if (exact != top.count) {
          heap_.push({exact, top.left, top.right, top.version, true});
          continue;
        }
      }
      if (top.count < 2) break;

      const auto l = vocab.expansion(top.left);
      const auto r = vocab.expansion(top.right);
      std::vector<SymbolId> joined(l.begin(), l.end());
      joined.insert(joined.end(), r.begin(), r.end());
      if (vocab.contains_expansion(joined)) {
        banned_.insert(key);
        continue;
      }

      const auto id = static_cast<TokenId>(vocab.size());
      const auto merged = merge(top.left, top.right, id);
      if (merged != top.count) throw Error("internal: BPE pair count drifted");
      vocab.add_rule(top.left, top.right, merged);
      flush_touched();
    }
  }

 private:
  void touch(std::uint64_t key) { touched_.push_back(key); }

  void increment(TokenId a, TokenId b, std::uint32_t pos) {
    const auto key = pair_key(a, b);
    auto& p = pairs_[key];
    ++p.count;
    p.version = ++clock_;
    p.where.push_back(pos);
    touch(key);
  }

  void decrement(TokenId a, TokenId b) {
    const auto key = pair_key(a, b);
    auto& p = pairs_.at(key);
    --p.count;
    p.version = ++clock_;
    touch(key);
  }

  void flush_touched() {
    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
    for (auto key : touched_) {
      const auto it = pairs_.find(key);
      if (it == pairs_.end()) continue;
      if (it->second.count == 0) {
        pairs_.erase(it);
        continue;
      }
      heap_.push({it->second.count, static_cast<TokenId>(key >> 32),
                  static_cast<TokenId>(key & 0xffffffffu), it->second.version, false});
    }
    touched_.clear();
  }

  bool live_pair(std::uint32_t p, TokenId a, TokenId b) const {
    if (tok_[p] != a) return false;
    const auto q = next_[p];
    return q != kGone && tok_[q] == b;
  }

  // Sorts and prunes `where`, then counts greedy left-to-right replacements.
  std::uint64_t non_overlapping_count(TokenId a, PairStat& stat) {
    auto& w = stat.where;
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    w.erase(std::remove_if(w.begin(), w.end(), [&](std::uint32_t p) { return !live_pair(p, a, a); }),
            w.end());
    std::uint64_t n = 0;
    std::uint32_t consumed = kGone;
    for (auto p : w) {
      if (p == consumed) continue;
      ++n;
      consumed = next_[p];
    }
    return n;
  }

  std::uint64_t merge(TokenId a, TokenId b, TokenId merged_id) {
    auto node = pairs_.extract(pair_key(a, b));
    auto where = std::move(node.mapped().where);
    std::sort(where.begin(), where.end());
    where.erase(std::unique(where.begin(), where.end()), where.end());

    std::uint64_t merged = 0;
    for (auto p : where) {
      if (!live_pair(p, a, b)) continue;
      const auto q = next_[p];
      const auto o = prev_[p];
      const auto r = next_[q];
      if (o != kGone && !(tok_[o] == a && a == b)) decrement(tok_[o], a);
      if (r != kGone && !(tok_[r] == b && a == b)) decrement(b, tok_[r]);
      tok_[p] = merged_id;
      tok_[q] = kGone;
      next_[p] = r;
      if (r != kGone) prev_[r] = p;
      if (o != kGone) increment(tok_[o], merged_id, o);
      if (r != kGone) increment(merged_id, tok_[r], p);
      ++merged;
    }
    // (a, a) occurrences adjacent to a replacement vanish with it.
    return merged;
  }

  std::vector<TokenId> tok_;
  std::vector<std::uint32_t> prev_;
  std::vector<std::uint32_t> next_;
  std::unordered_map<std::uint64_t, PairStat> pairs_;
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> heap_;
  std::vector<std::uint64_t> touched_;
  std::unordered_set<std::uint64_t> banned_;
  std::uint64_t clock_ = 0;  // version stamps stay unique across erase/recreate
};

}  // namespace

MergeVocabulary train(const std::vector<std::vector<SymbolId>>& lines, TokenizerKind kind,
                      bool rearranged, std::size_t target_size) {
  const auto base = alphabet_size(kind);
  if (lines.empty()) throw Error("cannot train a vocabulary on an empty corpus");
  if (target_size < base) {
    throw Error("target vocabulary size " + std::to_string(target_size) +
                " is below the base alphabet of " + std::to_string(base));
  }
  MergeVocabulary vocab(kind, rearranged, target_size);
  BpeTrainer trainer(lines, base);
  trainer.run(vocab, target_size);
  return vocab;
}

MergeVocabulary train(const std::vector<SymbolSequence>& corpus, std::size_t target_size) {
  if (corpus.empty()) throw Error("cannot train a vocabulary on an empty corpus");
  std::vector<std::vector<SymbolId>> lines;
  lines.reserve(corpus.size());
  for (const auto& s : corpus) {
    if (s.kind != corpus.front().kind) throw Error("corpus mixes tokenizer kinds");
    lines.push_back(s.symbols);
  }
  return train(lines, corpus.front().kind, false, target_size);
}

MergeVocabulary train(const std::vector<RearrangedSequence>& corpus, std::size_t target_size) {
  if (corpus.empty()) throw Error("cannot train a vocabulary on an empty corpus");
  std::vector<std::vector<SymbolId>> lines;
  lines.reserve(corpus.size());
  for (const auto& s : corpus) {
    if (s.kind != corpus.front().kind) throw Error("corpus mixes tokenizer kinds");
    lines.push_back(s.symbols);
  }
  return train(lines, corpus.front().kind, true, target_size);
}

// ---------------------------------------------------------------------------
// Apply / expand

TokenSequence apply(const MergeVocabulary& vocab, std::span<const SymbolId> symbols) {
  const auto n = static_cast<std::uint32_t>(symbols.size());
  std::vector<TokenId> tok(symbols.begin(), symbols.end());
  for (auto s : tok) {
    if (s >= vocab.base_size()) {
      throw Error("symbol " + std::to_string(s) + " outside the " +
                  std::string(to_string(vocab.kind())) + " alphabet");
    }
  }
  std::vector<std::uint32_t> next(n);
  std::vector<std::uint32_t> prev(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    prev[i] = i == 0 ? kGone : i - 1;
    next[i] = i + 1 == n ? kGone : i + 1;
  }

  using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (rank, left position)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  const auto offer = [&](std::uint32_t p) {
    const auto q = next[p];
    if (q == kGone) return;
    if (const auto r = vocab.rank(tok[p], tok[q])) queue.emplace(*r, p);
  };
  if (!vocab.rules().empty()) {
    for (std::uint32_t i = 0; i + 1 < n; ++i) offer(i);
  }

  const auto base = static_cast<TokenId>(vocab.base_size());
  while (!queue.empty()) {
    const auto [rank, p] = queue.top();
    queue.pop();
    if (tok[p] == kGone) continue;
    const auto q = next[p];
    if (q == kGone) continue;
    const auto& rule = vocab.rules()[rank];
    if (tok[p] != rule.left || tok[q] != rule.right) continue;
    tok[p] = base + rank;
    tok[q] = kGone;
    next[p] = next[q];
    if (next[p] != kGone) prev[next[p]] = p;
    if (prev[p] != kGone) offer(prev[p]);
    offer(p);
  }

  TokenSequence out;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (tok[i] != kGone) out.ids.push_back(tok[i]);
  }
  return out;
}

std::vector<SymbolId> expand(const MergeVocabulary& vocab, const TokenSequence& tokens) {
  std::vector<SymbolId> out;
  out.reserve(tokens.ids.size() * 2);
  for (auto id : tokens.ids) {
    const auto e = vocab.expansion(id);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

std::string to_json(const MergeVocabulary& vocab) {
  nlohmann::ordered_json doc;
  doc["format"] = "meshtok-vocab";
  doc["version"] = kVocabFormatVersion;
  doc["tokenizer"] = std::string(to_string(vocab.kind()));
  doc["base_size"] = vocab.base_size();
  doc["rearranged"] = vocab.rearranged();
  doc["target_size"] = vocab.target_size();
  auto rules = nlohmann::ordered_json::array();
  auto freqs = nlohmann::ordered_json::array();
  for (const auto& r : vocab.rules()) {
    rules.push_back({r.left, r.right});
    freqs.push_back(r.frequency);
  }
  doc["rules"] = std::move(rules);
  doc["frequencies"] = std::move(freqs);
  return doc.dump() + "\n";
}

MergeVocabulary vocab_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed vocabulary JSON: ") + e.what());
  }
  try {
    if (doc.value("format", std::string()) != "meshtok-vocab") {
      throw ParseError("not a meshtok vocabulary file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kVocabFormatVersion) {
      throw ParseError("unsupported vocabulary version " + std::to_string(version));
    }
    const auto kind = parse_tokenizer_kind(doc.at("tokenizer").get<std::string>());
    if (!kind) throw ParseError("unknown tokenizer in vocabulary file");
    const auto base = doc.at("base_size").get<std::size_t>();
    if (base != alphabet_size(*kind)) {
      throw ParseError("base size " + std::to_string(base) + " does not match tokenizer " +
                       std::string(to_string(*kind)));
    }
    MergeVocabulary vocab(*kind, doc.at("rearranged").get<bool>(),
                          doc.value("target_size", std::size_t{0}));
    const auto& rules = doc.at("rules");
    const auto freqs = doc.value("frequencies", nlohmann::json::array());
    if (!freqs.empty() && freqs.size() != rules.size()) {
      throw ParseError("frequencies and rules differ in length");
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto& r = rules[i];
      if (!r.is_array() || r.size() != 2) throw ParseError("rule " + std::to_string(i) + " is not a pair");
      const auto left = r[0].get<TokenId>();
      const auto right = r[1].get<TokenId>();
      if (left >= vocab.size() || right >= vocab.size()) {
        throw ParseError("rule " + std::to_string(i) + " references token " +
                         std::to_string(std::max(left, right)) + " before it exists");
      }
      try {
        vocab.add_rule(left, right, freqs.empty() ? 0 : freqs[i].get<std::uint64_t>());
      } catch (const Error& e) {
        throw ParseError(std::string("rule ") + std::to_string(i) + ": " + e.what());
      }
    }
    return vocab;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed vocabulary file: ") + e.what());
  }
}

void save(const MergeVocabulary& vocab, const std::filesystem::path& path) {
  write_text_file(path, to_json(vocab));
}

MergeVocabulary load(const std::filesystem::path& path) {
  return vocab_from_json(read_text_file(path));
}

}  // namespace meshtok
