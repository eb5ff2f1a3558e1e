#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "meshtok/codec.hpp"
#include "meshtok/compare.hpp"
#include "meshtok/error.hpp"
#include "meshtok/obj_io.hpp"
#include "meshtok/pipeline.hpp"
#include "meshtok/synthetic.hpp"
#include "meshtok/tokenizers.hpp"

using namespace meshtok;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("meshtok_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Directed-edge use counts of a raw mesh.
std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed_edges(const RawMesh& m) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> e;
  for (const auto& f : m.faces) {
    for (int k = 0; k < 3; ++k) ++e[{f[k], f[(k + 1) % 3]}];
  }
  return e;
}

bool closed_and_consistent(const RawMesh& m) {
  const auto e = directed_edges(m);
  for (const auto& [edge, n] : e) {
    if (n != 1) return false;
    if (!e.count({edge.second, edge.first})) return false;
  }
  return true;
}

bool consistent(const RawMesh& m) {
  for (const auto& [edge, n] : directed_edges(m)) {
    if (n != 1) return false;
  }
  return true;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) out[fs::relative(entry.path(), root).string()] = read_text_file(entry.path());
  }
  return out;
}

fs::path write_small_corpus(const std::string& name, std::size_t count, bool corrupt) {
  const auto dir = temp_dir(name);
  CorpusOptions o;
  o.max_faces = 400;
  write_corpus(dir, generate_corpus(count, 42, o));
  if (corrupt) write_text_file(dir / "zz_corrupt.obj", "v 0 0 0\nv 1 0 0\nf 1 2 9\n");
  return dir;
}

}  // namespace

TEST(Synthetic, StripShape) {
  SyntheticParams p;
  p.length = 3;
  const auto raw = generate_synthetic(SyntheticKind::Strip, p, 0);
  EXPECT_EQ(raw.faces.size(), 3u);
  EXPECT_EQ(raw.vertices.size(), 5u);
  const auto q = quantize(raw);
  EXPECT_EQ(EdgeAdjacency(q).interior_edge_count(), 2u);
  EXPECT_TRUE(consistent(raw));
}

TEST(Synthetic, IcosphereCounts) {
  for (int s = 0; s <= 4; ++s) {
    SyntheticParams p;
    p.subdivisions = s;
    const auto raw = generate_synthetic(SyntheticKind::Icosphere, p, 3);
    const std::size_t faces = 20u << (2 * s);
    EXPECT_EQ(raw.faces.size(), faces);
    EXPECT_EQ(raw.vertices.size(), faces / 2 + 2);
    EXPECT_TRUE(closed_and_consistent(raw)) << s;
  }
  SyntheticParams p;
  p.subdivisions = 1;
  EXPECT_EQ(generate_synthetic(SyntheticKind::Icosphere, p, 0).faces.size(), 80u);
  EXPECT_EQ(generate_synthetic(SyntheticKind::Icosphere, p, 0).vertices.size(), 42u);
}

TEST(Synthetic, GridAndTorus) {
  SyntheticParams p;
  p.rows = 2;
  p.cols = 2;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = generate_synthetic(SyntheticKind::Grid, p, seed);
    EXPECT_EQ(g.faces.size(), 8u);
    EXPECT_TRUE(consistent(g));
    const auto t = generate_synthetic(SyntheticKind::Torus, {}, seed);
    EXPECT_EQ(t.faces.size(), 2u * 16 * 8);
    EXPECT_TRUE(closed_and_consistent(t));
  }
}

TEST(Synthetic, NoisyDropsFacesDeterministically) {
  SyntheticParams p;
  p.subdivisions = 2;
  p.drop_fraction = 0.25;
  const auto a = generate_synthetic(SyntheticKind::Noisy, p, 4);
  const auto b = generate_synthetic(SyntheticKind::Noisy, p, 4);
  EXPECT_EQ(a.vertices, b.vertices);
  EXPECT_EQ(a.faces, b.faces);
  EXPECT_LT(a.faces.size(), 320u);
  EXPECT_GE(a.faces.size(), 1u);
  EXPECT_TRUE(consistent(a));
}

TEST(Synthetic, InvalidParams) {
  SyntheticParams p;
  p.length = 0;
  EXPECT_THROW(generate_synthetic(SyntheticKind::Strip, p, 0), Error);
  p = {};
  p.subdivisions = 5;
  EXPECT_THROW(generate_synthetic(SyntheticKind::Icosphere, p, 0), Error);
  p = {};
  p.rows = 0;
  EXPECT_THROW(generate_synthetic(SyntheticKind::Grid, p, 0), Error);
  p = {};
  p.major_segments = 2;
  EXPECT_THROW(generate_synthetic(SyntheticKind::Torus, p, 0), Error);
  p = {};
  p.drop_fraction = 1.0;
  EXPECT_THROW(generate_synthetic(SyntheticKind::Noisy, p, 0), Error);
  p = {};
  p.base = SyntheticKind::Noisy;
  EXPECT_THROW(generate_synthetic(SyntheticKind::Noisy, p, 0), Error);
  EXPECT_THROW(generate_corpus(3, 0, CorpusOptions{10, 120}), Error);
}

TEST(Synthetic, KindNames) {
  for (auto k : {SyntheticKind::Strip, SyntheticKind::Grid, SyntheticKind::Icosphere, SyntheticKind::Torus,
                 SyntheticKind::Noisy}) {
    EXPECT_EQ(parse_synthetic_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_synthetic_kind("cube").has_value());
}

TEST(Synthetic, CorpusDeterministicAndCapped) {
  const auto a = generate_corpus(60, 9);
  const auto b = generate_corpus(60, 9);
  ASSERT_EQ(a.size(), 60u);
  std::map<SyntheticKind, int> kinds;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(a[i].mesh.faces, b[i].mesh.faces);
    EXPECT_EQ(a[i].mesh.vertices, b[i].mesh.vertices);
    EXPECT_LE(a[i].mesh.faces.size(), 5000u);
    ++kinds[a[i].kind];
  }
  EXPECT_EQ(kinds.size(), 5u);
}

TEST(Codec, MethodsAndNames) {
  const auto m = table_methods(8192);
  ASSERT_EQ(m.size(), 12u);
  EXPECT_EQ(m[0].name(), "RAW");
  EXPECT_EQ(m[1].name(), "RAW + MC");
  EXPECT_EQ(m[2].name(), "RAW + RAC");
  EXPECT_EQ(m[3].name(), "RAW + RMC");
  EXPECT_EQ(m[11].id(), "edr-rmc-8192");
  EXPECT_EQ(m[4].id(), "amt");
}

TEST(Codec, VocabMismatchRejected) {
  const MergeVocabulary v(TokenizerKind::Amt, true);
  EXPECT_NO_THROW(check_vocab(v, TokenizerKind::Amt, true));
  EXPECT_THROW(check_vocab(v, TokenizerKind::Amt, false), Error);
  EXPECT_THROW(check_vocab(v, TokenizerKind::Edr, true), Error);
}

TEST(Codec, RoundTripEveryMethod) {
  const auto meshes = fixtures::corpus(12, 13, 800);
  std::map<std::string, MergeVocabulary> vocabs;
  for (const auto& method : table_methods(400)) {
    if (!method.merge) continue;
    std::vector<std::vector<SymbolId>> lines;
    for (const auto& m : meshes) lines.push_back(serialize(m, method.tokenizer, method.rearrange));
    vocabs.emplace(method.id(), train(lines, method.tokenizer, method.rearrange, 400));
  }
  for (const auto& m : meshes) {
    const RoundTripReference ref(m, 2000, 1);
    for (const auto& method : table_methods(400)) {
      const auto* v = method.merge ? &vocabs.at(method.id()) : nullptr;
      const auto r = roundtrip(ref, method, v);
      EXPECT_TRUE(r.same_face_set) << method.id();
      EXPECT_EQ(r.distances.chamfer, 0.0) << method.id();
      EXPECT_EQ(r.distances.hausdorff, 0.0) << method.id();
      if (method.tokenizer != TokenizerKind::Amt) {
        EXPECT_TRUE(r.identical) << method.id();
      }
    }
  }
}

TEST(Codec, SameFaceSetIgnoresWinding) {
  auto m = fixtures::strip(4);
  auto flipped = m;
  std::swap(flipped.faces[1][1], flipped.faces[1][2]);
  EXPECT_TRUE(same_face_set(m, flipped));
  EXPECT_NE(m, flipped);
  flipped.faces.pop_back();
  EXPECT_FALSE(same_face_set(m, flipped));
}

TEST(Pipeline, Sha256) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Pipeline, ParallelForRunsEveryIndexAndRethrows) {
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(100, 4, [](std::size_t i) {
                 if (i == 37) throw Error("boom");
               }),
               Error);
}

TEST(Pipeline, CorruptFileIsSkipped) {
  const auto dir = write_small_corpus("pipe_corrupt", 20, true);
  const auto out = temp_dir("pipe_corrupt_out");
  PipelineConfig cfg;
  cfg.tokenizer = TokenizerKind::Edr;
  std::vector<std::string> logged;
  cfg.log = [&](const std::string& s) { logged.push_back(s); };
  const auto r = run_pipeline(dir, cfg, out);
  EXPECT_EQ(r.manifest.skipped.size(), 1u);
  EXPECT_EQ(r.manifest.skipped[0].name, "zz_corrupt.obj");
  EXPECT_EQ(r.manifest.processed(), 20u);
  EXPECT_EQ(r.manifest.total(), 21u);
  EXPECT_FALSE(logged.empty());
  EXPECT_TRUE(fs::exists(r.output_dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(r.output_dir / "report.json"));
  std::size_t token_files = 0;
  for (const auto& e : fs::directory_iterator(r.output_dir / "tokens")) token_files += e.is_regular_file();
  EXPECT_EQ(token_files, 20u);
  fs::remove_all(dir);
  fs::remove_all(out);
}

TEST(Pipeline, MergedRunReportsRanges) {
  const auto dir = write_small_corpus("pipe_rmc", 100, false);
  const auto out = temp_dir("pipe_rmc_out");
  const auto corpus = load_corpus(dir);
  const auto lines = serialize_corpus(corpus, TokenizerKind::Edr, true);
  save(train(lines, TokenizerKind::Edr, true, 256), out / "edr-rmc-256.json");
  PipelineConfig cfg;
  cfg.tokenizer = TokenizerKind::Edr;
  cfg.rearrange = true;
  cfg.vocab_path = out / "edr-rmc-256.json";
  const auto r = run_pipeline(dir, cfg, out);
  EXPECT_LT(r.report.compression_ratio, 1.0);
  EXPECT_GT(r.report.ptme, 0.0);
  EXPECT_LE(r.report.usable, 100u);
  EXPECT_EQ(r.report.vocab_size, 256u);
  EXPECT_EQ(r.manifest.processed() + r.manifest.skipped.size(), r.manifest.total());

  // Token files hold ids that expand back to each mesh.
  const auto vocab = load(cfg.vocab_path);
  const auto& first = corpus.files.front();
  const auto stem = fs::path(first.name).stem().string();
  const auto ids = parse_ids(read_text_file(r.output_dir / "tokens" / (stem + ".txt")));
  EXPECT_EQ(decode_tokens({ids}, TokenizerKind::Edr, true, &vocab), first.mesh);

  cfg.tokenizer = TokenizerKind::Amt;
  EXPECT_THROW(run_pipeline(dir, cfg, out), Error);
  cfg.tokenizer = TokenizerKind::Edr;
  write_text_file(out / "broken.json", "{not json");
  cfg.vocab_path = out / "broken.json";
  EXPECT_THROW(run_pipeline(dir, cfg, out), ParseError);
  EXPECT_THROW(run_pipeline(dir / "missing", PipelineConfig{}, out), Error);
  fs::remove_all(dir);
  fs::remove_all(out);
}

TEST(Pipeline, RerunIsByteIdenticalAndCached) {
  const auto dir = write_small_corpus("pipe_det", 25, true);
  const auto out_a = temp_dir("pipe_det_a");
  const auto out_b = temp_dir("pipe_det_b");
  const auto cache = temp_dir("pipe_det_cache");
  PipelineConfig cfg;
  cfg.tokenizer = TokenizerKind::Amt;
  cfg.rearrange = true;
  cfg.cache_dir = cache;
  const auto a = run_pipeline(dir, cfg, out_a);
  EXPECT_EQ(a.cache_hits, 0u);
  cfg.threads = 1;
  const auto b = run_pipeline(dir, cfg, out_b);
  EXPECT_EQ(b.cache_hits, 25u);
  EXPECT_EQ(snapshot(out_a), snapshot(out_b));
  EXPECT_EQ(a.manifest.fingerprint, b.manifest.fingerprint);

  // Touching one input changes the fingerprint.
  write_text_file(dir / "00000_extra.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  const auto c = run_pipeline(dir, cfg, out_b);
  EXPECT_NE(c.manifest.fingerprint, a.manifest.fingerprint);
  EXPECT_EQ(c.manifest.processed(), 26u);
  for (const auto& p : {dir, out_a, out_b, cache}) fs::remove_all(p);
}

TEST(Pipeline, ConfigId) {
  PipelineConfig cfg;
  cfg.tokenizer = TokenizerKind::Edr;
  cfg.rearrange = true;
  EXPECT_EQ(cfg.config_id(), "edr-rac-b7-w9000");
  EXPECT_EQ(cfg.config_id("0123456789abcdef"), "edr-rac-b7-w9000-v0123456789ab");
}

TEST(Compare, SmallCorpusRows) {
  const auto dir = write_small_corpus("cmp", 30, false);
  const auto corpus = load_corpus(dir);
  CompareOptions o;
  o.vocab_size = 512;
  o.roundtrip = true;
  o.sample_points = 500;
  const auto r = compare(corpus, o);
  ASSERT_EQ(r.rows.size(), 12u);
  for (std::size_t t = 0; t < 3; ++t) {
    const auto& base = r.rows[4 * t].report;
    const auto& rac = r.rows[4 * t + 2].report;
    EXPECT_EQ(base.compression_ratio, rac.compression_ratio);
    EXPECT_EQ(base.pcme, rac.pcme);
    EXPECT_NEAR(base.ptme, base.pcme, 1e-12);
  }
  EXPECT_EQ(r.rows[0].report.token_compression_ratio, 1.0);
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.roundtrip.has_value());
    EXPECT_EQ(row.roundtrip->chamfer, 0.0);
    EXPECT_EQ(row.roundtrip->hausdorff, 0.0);
    EXPECT_EQ(row.roundtrip_failures, 0u);
  }
  EXPECT_EQ(r.vocabularies.size(), 6u);
  EXPECT_FALSE(r.sweep.empty());
  fs::remove_all(dir);
}
