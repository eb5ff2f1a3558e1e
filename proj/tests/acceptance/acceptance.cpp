// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "meshtok/codec.hpp"
#include "meshtok/compare.hpp"
#include "meshtok/entropy.hpp"
#include "meshtok/obj_io.hpp"
#include "meshtok/pipeline.hpp"
#include "meshtok/rearrange.hpp"
#include "meshtok/report.hpp"
#include "meshtok/synthetic.hpp"
#include "meshtok/tokenizers.hpp"
#include "meshtok/vocab.hpp"
#include "oracles.hpp"

using namespace meshtok;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and sizes.
constexpr std::size_t kRoundTripMeshes = 200;
constexpr std::size_t kOrderingMeshes = 500;
constexpr std::size_t kMaxFaces = 5000;
constexpr std::size_t kVocab = 8192;
constexpr std::size_t kSamples = 10000;
constexpr double kRoundTripSeconds = 300.0;
constexpr double kDualPathTol = 1e-9;
constexpr double kIdentityTol = 1e-12;
constexpr double kMergeGainTol = 1e-9;
constexpr std::size_t kToyCorpora = 25;
constexpr double kCrBand = 0.7;
constexpr double kStripCrBound = 0.37;

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / "meshtok_acceptance" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

LoadedCorpus synthetic_corpus(std::size_t count, std::uint64_t seed, const std::string& name) {
  const auto dir = scratch(name);
  CorpusOptions o;
  o.max_faces = kMaxFaces;
  write_corpus(dir, generate_corpus(count, seed, o));
  return load_corpus(dir);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const MergeVocabulary* vocab_for(const CompareResult& r, const Method& m) {
  return m.merge ? &r.vocabularies.at(m.id()) : nullptr;
}

// -sum N_s log p_s / raw length, from the token streams, with natural logs.
double oracle_ptme(const std::vector<TokenSequence>& tokens, std::uint64_t raw_length) {
  std::map<std::uint32_t, double> counts;
  double n = 0;
  for (const auto& t : tokens) {
    for (auto id : t.ids) {
      counts[id] += 1;
      n += 1;
    }
  }
  double info = 0;
  for (const auto& [_, c] : counts) info -= c * std::log(c / n);
  return info / std::log(2.0) / static_cast<double>(raw_length);
}

// 1: every configuration decodes every mesh back to its face set, and the
// seeded surface samples coincide.
Outcome lossless_roundtrip(std::uint64_t seed) {
  const auto t0 = Clock::now();
  const auto corpus = synthetic_corpus(kRoundTripMeshes, seed, "roundtrip_corpus");
  CompareOptions o;
  o.vocab_size = kVocab;
  o.sweep = false;
  const auto trained = compare(corpus, o);
  const auto methods = table_methods(kVocab);

  std::atomic<std::size_t> face_mismatch{0};
  std::atomic<std::size_t> nonzero{0};
  std::atomic<std::size_t> errors{0};
  std::mutex mutex;
  double worst_cd = 0;
  double worst_hd = 0;
  parallel_for(corpus.files.size(), 0, [&](std::size_t i) {
    const auto& mesh = corpus.files[i].mesh;
    const RoundTripReference ref(mesh, kSamples, seed + i);
    const auto want = oracle::face_set(mesh);
    for (const auto& m : methods) {
      try {
        const auto* v = vocab_for(trained, m);
        const auto decoded =
            decode_tokens(encode_tokens(mesh, m.tokenizer, m.rearrange, v), m.tokenizer, m.rearrange, v);
        if (oracle::face_set(decoded) != want) ++face_mismatch;
        const auto d = ref.compare(decoded);
        if (d.chamfer != 0.0 || d.hausdorff != 0.0) ++nonzero;
        std::lock_guard lock(mutex);
        worst_cd = std::max(worst_cd, d.chamfer);
        worst_hd = std::max(worst_hd, d.hausdorff);
      } catch (const std::exception&) {
        ++errors;
      }
    }
  });
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::size_t max_faces = 0;
  for (const auto& f : corpus.files) max_faces = std::max(max_faces, f.mesh.faces.size());
  Outcome out;
  out.pass = corpus.files.size() == kRoundTripMeshes && face_mismatch == 0 && nonzero == 0 &&
             errors == 0 && secs < kRoundTripSeconds;
  out.detail = std::to_string(corpus.files.size()) + " meshes (max " + std::to_string(max_faces) +
               " faces) x " + std::to_string(methods.size()) + " configs, face-set mismatches " +
               std::to_string(face_mismatch) + ", nonzero CD/HD " + std::to_string(nonzero) +
               " (worst CD " + fmt("%g", worst_cd) + ", HD " + fmt("%g", worst_hd) + "), errors " +
               std::to_string(errors) + ", " + fmt("%.1f", secs) + " s";
  return out;
}

// 2
Outcome rac_inverse() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> triples(0, 200);
  std::uniform_int_distribution<SymbolId> coord(0, 127);
  std::size_t bad = 0;
  for (int t = 0; t < 10000; ++t) {
    std::vector<SymbolId> v(3 * triples(rng));
    for (auto& x : v) x = coord(rng);
    if (rac_decode_full(rac_encode_full(v)) != v) ++bad;
  }
  std::vector<SymbolId> nine(9);
  std::iota(nine.begin(), nine.end(), 1u);
  const bool trace = rac_encode_full(nine) == std::vector<SymbolId>{1, 4, 7, 2, 5, 8, 3, 6, 9};
  return {bad == 0 && trace, "10000 lists of length 0..600, failures " + std::to_string(bad) +
                                 ", [1..9] trace " + (trace ? "ok" : "wrong")};
}

// 3: report PTME against an independent recount, for every row.
double dual_path_gap(const LoadedCorpus& corpus, const CompareResult& r, std::size_t vocab_size) {
  std::uint64_t raw = 0;
  for (const auto& f : corpus.files) raw += 9 * f.mesh.faces.size();
  double worst = 0;
  const auto methods = table_methods(vocab_size);
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto& m = methods[i];
    const auto lines = serialize_corpus(corpus, m.tokenizer, m.rearrange);
    const MergeVocabulary identity(m.tokenizer, m.rearrange);
    const auto* v = m.merge ? vocab_for(r, m) : &identity;
    std::vector<TokenSequence> tokens(lines.size());
    parallel_for(lines.size(), 0, [&](std::size_t k) { tokens[k] = meshtok::apply(*v, lines[k]); });
    const double want = oracle_ptme(tokens, raw);
    worst = std::max(worst, std::abs(r.rows[i].report.ptme - want));
    worst = std::max(worst, std::abs(r.rows[i].report.ptme - r.rows[i].report.ptme_direct));
  }
  return worst;
}

// 4
Outcome identity_consistency(const CompareResult& r) {
  double worst = 0;
  bool rac_equal = true;
  for (std::size_t t = 0; t < 3; ++t) {
    const auto& base = r.rows[4 * t].report;
    const auto& rac = r.rows[4 * t + 2].report;
    worst = std::max({worst, std::abs(base.ptme - base.pcme), std::abs(rac.ptme - rac.pcme)});
    rac_equal = rac_equal && base.compression_ratio == rac.compression_ratio && base.pcme == rac.pcme;
  }
  const bool raw_one = r.rows[0].report.token_compression_ratio == 1.0;
  return {worst <= kIdentityTol && rac_equal && raw_one,
          "max |PTME-PCME| " + fmt("%.2e", worst) + ", RAC rows equal base CR/PCME: " +
              (rac_equal ? "yes" : "no") + ", RAW CR " + fmt("%.3f", r.rows[0].report.token_compression_ratio)};
}

// 5
Outcome merge_gain_prediction() {
  std::mt19937_64 rng(5);
  double worst = 0;
  std::size_t corpora = 0;
  for (std::size_t t = 0; t < kToyCorpora; ++t) {
    const SymbolId alphabet = 2 + static_cast<SymbolId>(t % 7);
    std::uniform_int_distribution<SymbolId> sym(0, alphabet - 1);
    std::uniform_int_distribution<std::size_t> len(2, 80);
    std::vector<std::vector<SymbolId>> lines(1 + t % 6);
    for (auto& l : lines) {
      l.resize(len(rng));
      for (auto& x : l) x = sym(rng);
    }
    lines.push_back({0, 1, 0, 1});
    const auto v = train(lines, TokenizerKind::Raw, false, 129);
    if (v.rules().size() != 1) continue;
    const auto& rule = v.rules()[0];
    UnigramStats stats;
    for (const auto& l : lines) stats.add(l);
    std::vector<oracle::Line> before(lines.begin(), lines.end());
    std::vector<oracle::Line> after;
    double n_sym = 0;
    double n_tok = 0;
    for (const auto& l : before) {
      after.push_back(oracle::replace(l, rule.left, rule.right, 128));
      n_sym += static_cast<double>(l.size());
      n_tok += static_cast<double>(after.back().size());
    }
    const double pcme_before = oracle::entropy_bits(before);
    const double pcme_after = oracle::entropy_bits(after) / (n_sym / n_tok);
    const auto g = merge_gain(stats, rule.frequency, rule.left, rule.right);
    worst = std::max(worst, std::abs(pcme_after - (pcme_before + g.predicted_delta(1.0))));
    ++corpora;
  }
  const std::vector<SymbolId> abab{0, 1, 0, 1, 0, 1};
  const auto g = merge_gain(UnigramStats(abab), 3, 0, 1);
  MergeVocabulary v(TokenizerKind::Raw);
  v.add_rule(0, 1);
  const auto merged = meshtok::apply(v, abab);
  const double delta = ptme(UnigramStats(merged.ids), v.token_lengths(), 1.0) -
                       pcme(UnigramStats(abab), 1.0);
  const bool hand = delta == -1.0 && g.predicted_delta(1.0) == -1.0;
  return {corpora >= 20 && worst <= kMergeGainTol && hand,
          std::to_string(corpora) + " toy corpora, max error " + fmt("%.2e", worst) +
              ", [a,b,a,b,a,b] delta " + fmt("%g", delta)};
}

// 6
Outcome monotone_sweep(const CompareResult& r) {
  std::map<std::string, std::vector<const SweepPoint*>> series;
  for (const auto& p : r.sweep) series[p.method].push_back(&p);
  bool ok = series.size() == 6;
  std::string detail;
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->vocab_size < b->vocab_size; });
    ok = ok && pts.size() == std::size(kVocabSweep);
    for (std::size_t i = 1; i < pts.size(); ++i) ok = ok && pts[i]->compression_ratio <= pts[i - 1]->compression_ratio;
    if (!detail.empty()) detail += "; ";
    detail += name + " " + fmt("%.3f", pts.front()->compression_ratio) + "->" + fmt("%.3f", pts.back()->compression_ratio);
  }
  return {ok, detail};
}

// 7
Outcome method_ordering(const CompareResult& r) {
  bool ok = true;
  std::string detail;
  for (std::size_t t = 0; t < 3; ++t) {
    const auto& base = r.rows[4 * t].report;
    const auto& mc = r.rows[4 * t + 1].report;
    const auto& rmc = r.rows[4 * t + 3].report;
    const bool a = rmc.ptme < base.ptme;
    const double ratio = rmc.token_compression_ratio / base.token_compression_ratio;
    const bool b = ratio <= kCrBand;
    const bool c = rmc.histogram.mean_coordinates() > mc.histogram.mean_coordinates();
    const bool over = std::any_of(base.per_mesh.begin(), base.per_mesh.end(),
                                  [&](const MeshEntropy& m) { return m.token_length > base.context_window; });
    const bool d = over ? rmc.usable > base.usable : rmc.usable >= base.usable;
    ok = ok && a && b && c && d;
    if (!detail.empty()) detail += "; ";
    detail += base.method + ": PTME " + fmt("%.3f", base.ptme) + "->" + fmt("%.3f", rmc.ptme) + (a ? "" : "(x)") +
              ", CR x" + fmt("%.3f", ratio) + (b ? "" : "(x)") + ", coords/token MC " +
              fmt("%.2f", mc.histogram.mean_coordinates()) + " RMC " + fmt("%.2f", rmc.histogram.mean_coordinates()) +
              (c ? "" : "(x)") + ", usable " + std::to_string(base.usable) + "->" + std::to_string(rmc.usable) +
              (d ? "" : "(x)");
  }
  return {ok, detail};
}

// 8
Outcome strip_formulas() {
  std::size_t bad = 0;
  double cr50 = 0;
  for (std::size_t n = 1; n <= 50; ++n) {
    const auto m = fixtures::strip(n);
    if (m.faces.size() != n) {
      ++bad;
      continue;
    }
    const auto amt = amt_encode(m).size();
    const auto edr = edr_encode(m).size();
    if (amt != 9 + 3 * (n - 1) + 1) ++bad;
    if (edr != 9 + 4 * (n - 1) + 1) ++bad;
    if (n == 50) cr50 = static_cast<double>(amt) / static_cast<double>(raw_encode(m).size());
  }
  return {bad == 0 && cr50 < kStripCrBound,
          "n = 1..50, mismatches " + std::to_string(bad) + ", AMT CR(50) " + fmt("%.4f", cr50)};
}

// 9
Outcome alphabet_sizes(const LoadedCorpus& corpus) {
  const std::size_t want[] = {128, 129, 131};
  const TokenizerKind kinds[] = {TokenizerKind::Raw, TokenizerKind::Amt, TokenizerKind::Edr};
  bool ok = true;
  std::string detail;
  for (int k = 0; k < 3; ++k) {
    const MergeVocabulary v(kinds[k]);
    SymbolId max_seen = 0;
    for (const auto& f : corpus.files) {
      for (auto s : encode(kinds[k], f.mesh).symbols) max_seen = std::max(max_seen, s);
    }
    ok = ok && alphabet_size(kinds[k]) == want[k] && v.base_size() == want[k] && max_seen + 1 == want[k];
    if (!detail.empty()) detail += ", ";
    detail += std::string(to_string(kinds[k])) + " " + std::to_string(v.base_size()) + " (max id " +
              std::to_string(max_seen) + ")";
  }
  return {ok, detail};
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
  }
  return out;
}

// One full run: corpus generation, vocabulary training, pipelines, comparison.
fs::path full_run(const std::string& name, std::size_t threads) {
  const auto root = scratch(name);
  CorpusOptions o;
  o.max_faces = 1500;
  write_corpus(root / "corpus", generate_corpus(80, 10, o));
  const auto corpus = load_corpus(root / "corpus", kDefaultBits, threads);
  fs::create_directories(root / "vocab");
  const std::pair<TokenizerKind, bool> merged[] = {{TokenizerKind::Edr, true}, {TokenizerKind::Amt, false}};
  for (const auto& [kind, rac] : merged) {
    const auto v = train(serialize_corpus(corpus, kind, rac, threads), kind, rac, 1024);
    save(v, root / "vocab" / (Method{kind, rac, true, 1024}.id() + ".json"));
  }
  for (const auto& [kind, rac] : merged) {
    PipelineConfig cfg;
    cfg.tokenizer = kind;
    cfg.rearrange = rac;
    cfg.threads = threads;
    cfg.vocab_path = root / "vocab" / (Method{kind, rac, true, 1024}.id() + ".json");
    run_pipeline(root / "corpus", cfg, root / "out");
  }
  PipelineConfig plain;
  plain.tokenizer = TokenizerKind::Raw;
  plain.threads = threads;
  run_pipeline(root / "corpus", plain, root / "out");

  CompareOptions co;
  co.vocab_size = 1024;
  co.threads = threads;
  co.roundtrip = true;
  co.sample_points = 2000;
  co.seed = 3;
  co.vocab_dir = root / "compare_vocab";
  fs::create_directories(co.vocab_dir);
  const auto r = compare(corpus, co);
  write_text_file(root / "compare" / "rows.json", rows_json(r.rows));
  write_text_file(root / "compare" / "table.txt", format_table(r.rows));
  write_text_file(root / "compare" / "sweep.csv", sweep_csv(r.sweep));
  return root;
}

// 10
Outcome determinism() {
  const auto a = snapshot(full_run("determinism_a", 0));
  const auto b = snapshot(full_run("determinism_b", 1));
  std::size_t tokens = 0;
  std::size_t vocabs = 0;
  std::size_t reports = 0;
  for (const auto& [path, _] : a) {
    tokens += path.find("/tokens/") != std::string::npos;
    vocabs += path.find("vocab/") != std::string::npos;
    reports += path.ends_with("report.json") || path.starts_with("compare/");
  }
  std::size_t differing = 0;
  for (const auto& [path, bytes] : a) {
    const auto it = b.find(path);
    differing += it == b.end() || it->second != bytes;
  }
  differing += b.size() > a.size() ? b.size() - a.size() : 0;
  const bool ok = differing == 0 && tokens > 0 && vocabs > 0 && reports > 0;
  return {ok, std::to_string(a.size()) + " files (" + std::to_string(tokens) + " token, " + std::to_string(vocabs) +
                  " vocab, " + std::to_string(reports) + " report), differing " + std::to_string(differing) +
                  ", thread counts auto vs 1"};
}

}  // namespace

int main() {
  std::vector<std::pair<int, std::string>> names = {
      {1, "lossless round-trip"},  {2, "RAC inverse"},        {3, "PTME dual path"},
      {4, "identity vocabulary"},  {5, "merge gain"},         {6, "monotone compression"},
      {7, "ordering on corpus"},   {8, "strip formulas"},     {9, "alphabet sizes"},
      {10, "determinism"}};
  std::map<int, Outcome> results;
  const auto run = [&](int id, const std::function<Outcome()>& fn) {
    try {
      results[id] = fn();
    } catch (const std::exception& e) {
      results[id] = {false, std::string("exception: ") + e.what()};
    }
  };

  run(1, [] { return lossless_roundtrip(1); });
  run(2, rac_inverse);

  LoadedCorpus big;
  CompareResult table;
  try {
    big = synthetic_corpus(kOrderingMeshes, 7, "ordering_corpus");
    CompareOptions o;
    o.vocab_size = kVocab;
    table = compare(big, o);
  } catch (const std::exception& e) {
    for (int id : {3, 4, 6, 7, 9}) results[id] = {false, std::string("exception: ") + e.what()};
  }
  if (!table.rows.empty()) {
    run(3, [&] {
      double worst = dual_path_gap(big, table, kVocab);
      // Also on a small corpus with a small vocabulary.
      const auto small = synthetic_corpus(40, 3, "dual_path_corpus");
      CompareOptions o;
      o.vocab_size = 300;
      o.sweep = false;
      worst = std::max(worst, dual_path_gap(small, compare(small, o), 300));
      return Outcome{worst <= kDualPathTol, "24 configurations over 2 corpora, max gap " + fmt("%.2e", worst)};
    });
    run(4, [&] { return identity_consistency(table); });
    run(6, [&] { return monotone_sweep(table); });
    run(7, [&] {
      auto o = method_ordering(table);
      o.detail = std::to_string(big.files.size()) + " meshes; " + o.detail;
      return o;
    });
    run(9, [&] { return alphabet_sizes(big); });
  }
  run(5, merge_gain_prediction);
  run(8, strip_formulas);
  run(10, determinism);

  int failed = 0;
  for (const auto& [id, name] : names) {
    const auto& r = results[id];
    failed += !r.pass;
    std::printf("%s %2d %-22s %s\n", r.pass ? "PASS" : "FAIL", id, name.c_str(), r.detail.c_str());
  }
  std::error_code ec;
  fs::remove_all(fs::temp_directory_path() / "meshtok_acceptance", ec);
  return failed == 0 ? 0 : 1;
}
