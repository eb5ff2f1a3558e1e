#include "meshtok/codec.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "meshtok/error.hpp"
#include "meshtok/rearrange.hpp"
#include "meshtok/tokenizers.hpp"

namespace meshtok {

std::string Method::name() const {
  std::string n(to_string(tokenizer));
  for (auto& c : n) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (rearrange && merge) return n + " + RMC";
  if (merge) return n + " + MC";
  if (rearrange) return n + " + RAC";
  return n;
}

std::string Method::id() const {
  std::string n(to_string(tokenizer));
  for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (rearrange && merge) return n + "-rmc-" + std::to_string(vocab_size);
  if (merge) return n + "-mc-" + std::to_string(vocab_size);
  if (rearrange) return n + "-rac";
  return n;
}

std::vector<Method> table_methods(std::size_t vocab_size) {
  std::vector<Method> out;
  for (auto kind : {TokenizerKind::Raw, TokenizerKind::Amt, TokenizerKind::Edr}) {
    out.push_back({kind, false, false, vocab_size});
    out.push_back({kind, false, true, vocab_size});
    out.push_back({kind, true, false, vocab_size});
    out.push_back({kind, true, true, vocab_size});
  }
  return out;
}

std::vector<SymbolId> serialize(const QuantizedMesh& mesh, TokenizerKind kind, bool rearrange) {
  auto seq = encode(kind, mesh);
  if (!rearrange) return std::move(seq.symbols);
  return rearrange_sequence(seq).symbols;
}

QuantizedMesh deserialize(std::span<const SymbolId> symbols, TokenizerKind kind, bool rearrange,
                          DecodeMode mode, int bits) {
  std::vector<SymbolId> copy(symbols.begin(), symbols.end());
  if (!rearrange) return decode(SymbolSequence{kind, std::move(copy)}, mode, bits);
  auto plain = unrearrange_sequence(RearrangedSequence{kind, std::move(copy)}, mode);
  return decode(plain, mode, bits);
}

void check_vocab(const MergeVocabulary& vocab, TokenizerKind kind, bool rearrange) {
  if (vocab.kind() != kind) {
    throw Error("vocabulary was trained for " + std::string(to_string(vocab.kind())) +
                ", not " + std::string(to_string(kind)));
  }
  if (vocab.rearranged() != rearrange) {
    throw Error(vocab.rearranged() ? "vocabulary expects rearranged sequences"
                                   : "vocabulary expects sequences without rearrangement");
  }
}

TokenSequence encode_tokens(const QuantizedMesh& mesh, TokenizerKind kind, bool rearrange,
                            const MergeVocabulary* vocab) {
  auto symbols = serialize(mesh, kind, rearrange);
  if (vocab == nullptr) return TokenSequence{std::move(symbols)};
  check_vocab(*vocab, kind, rearrange);
  return meshtok::apply(*vocab, symbols);
}

QuantizedMesh decode_tokens(const TokenSequence& tokens, TokenizerKind kind, bool rearrange,
                            const MergeVocabulary* vocab, DecodeMode mode, int bits) {
  if (vocab == nullptr) return deserialize(tokens.ids, kind, rearrange, mode, bits);
  check_vocab(*vocab, kind, rearrange);
  return deserialize(expand(*vocab, tokens), kind, rearrange, mode, bits);
}

RoundTripReference::RoundTripReference(QuantizedMesh mesh, std::size_t sample_points,
                                       std::uint64_t seed)
    : mesh_(std::move(mesh)),
      sample_points_(sample_points),
      seed_(seed),
      cloud_(sample_surface(mesh_, sample_points, seed)),
      tree_(cloud_.points) {}

SetDistances RoundTripReference::compare(const QuantizedMesh& decoded) const {
  const auto other = sample_surface(decoded, sample_points_, seed_);
  const KdTree other_tree(other.points);
  const auto ab = nearest_distances(cloud_, other_tree);
  const auto ba = nearest_distances(other, tree_);
  double sum_ab = 0.0;
  double sum_ba = 0.0;
  SetDistances d;
  for (double x : ab) {
    sum_ab += x;
    d.hausdorff = std::max(d.hausdorff, x);
  }
  for (double x : ba) {
    sum_ba += x;
    d.hausdorff = std::max(d.hausdorff, x);
  }
  d.chamfer = 0.5 * (sum_ab / static_cast<double>(ab.size()) + sum_ba / static_cast<double>(ba.size()));
  return d;
}

bool same_face_set(const QuantizedMesh& a, const QuantizedMesh& b) {
  if (a.vertices != b.vertices || a.faces.size() != b.faces.size()) return false;
  const auto sorted = [](const QuantizedMesh& m) {
    std::vector<Face> out = m.faces;
    for (auto& f : out) std::sort(f.begin(), f.end());
    std::sort(out.begin(), out.end());
    return out;
  };
  return sorted(a) == sorted(b);
}

RoundTripResult roundtrip(const RoundTripReference& reference, const Method& method,
                          const MergeVocabulary* vocab) {
  if (method.merge && vocab == nullptr) throw Error(method.name() + " needs a vocabulary");
  const MergeVocabulary* used = method.merge ? vocab : nullptr;
  const auto tokens = encode_tokens(reference.mesh(), method.tokenizer, method.rearrange, used);
  const auto decoded = decode_tokens(tokens, method.tokenizer, method.rearrange, used,
                                     DecodeMode::Strict, reference.mesh().bits);
  RoundTripResult r;
  r.identical = decoded == reference.mesh();
  r.same_face_set = r.identical || same_face_set(decoded, reference.mesh());
  r.decoded_faces = decoded.faces.size();
  r.distances = decoded.faces.empty() ? SetDistances{std::numeric_limits<double>::infinity(),
                                                     std::numeric_limits<double>::infinity()}
                                      : reference.compare(decoded);
  return r;
}

}  // namespace meshtok
