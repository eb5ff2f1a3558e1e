// meshtok command-line tool.
//
// Exit codes: 0 success, 1 a mesh failed (decode error, skipped input under
// --strict, lossy round trip), 2 usage error, 3 any other error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meshtok/codec.hpp"
#include "meshtok/compare.hpp"
#include "meshtok/error.hpp"
#include "meshtok/obj_io.hpp"
#include "meshtok/pipeline.hpp"
#include "meshtok/report.hpp"
#include "meshtok/synthetic.hpp"
#include "meshtok/tokenizers.hpp"

namespace fs = std::filesystem;
using namespace meshtok;

namespace {

constexpr int kExitMeshFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string tokenizer = "edr";
  bool rearrange = false;
  bool merge = false;
  bool auto_train = false;
  std::string vocab;
  std::size_t vocab_size = kDefaultVocabSize;
  int bits = kDefaultBits;
  std::size_t context_window = kDefaultContextWindow;
  std::size_t sample_points = kDefaultSamplePoints;
  std::uint64_t seed = 0;
  std::string format = "table";
  std::size_t threads = 0;
  bool strict = false;
  bool lenient = false;
  std::string input;
  std::string output;
};

TokenizerKind kind_of(const Options& o) {
  auto k = parse_tokenizer_kind(o.tokenizer);
  if (!k) throw UsageError("unknown tokenizer '" + o.tokenizer + "'");
  return *k;
}

std::optional<MergeVocabulary> load_vocab(const Options& o) {
  if (o.vocab.empty()) return std::nullopt;
  auto v = load(o.vocab);
  check_vocab(v, kind_of(o), o.rearrange);
  return v;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
  } else {
    write_text_file(o.output, text);
  }
}

void log_line(const std::string& msg) { std::cerr << msg << '\n'; }

void add_tokenizer(CLI::App* sub, Options& o) {
  sub->add_option("-t,--tokenizer", o.tokenizer, "raw, amt or edr")
      ->check(CLI::IsMember({"raw", "amt", "edr"}, CLI::ignore_case))
      ->capture_default_str();
  sub->add_flag("-r,--rearrange", o.rearrange, "regroup coordinates before merging (RAC)");
  sub->add_option("--bits", o.bits, "quantization bits")->check(CLI::Range(1, 7))->capture_default_str();
}

void add_vocab(CLI::App* sub, Options& o) {
  sub->add_option("--vocab", o.vocab, "merge vocabulary file")->check(CLI::ExistingFile);
}

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("-f,--format", o.format, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
}

// Single-mesh commands decode strictly unless --lenient; corpus commands
// skip bad meshes unless --strict.
void add_mode(CLI::App* sub, Options& o) {
  auto* s = sub->add_flag("--strict", o.strict, "malformed input fails the mesh");
  auto* l = sub->add_flag("--lenient", o.lenient, "keep complete faces of malformed input");
  s->excludes(l);
}

DecodeMode mode_of(const Options& o) { return o.lenient ? DecodeMode::Lenient : DecodeMode::Strict; }

// ---------------------------------------------------------------------------

int cmd_tokenize(const Options& o) {
  const auto kind = kind_of(o);
  const auto vocab = load_vocab(o);
  const auto mesh = quantize(read_obj(o.input), o.bits);
  if (mesh.faces.empty()) throw DecodeError(o.input + ": no faces after quantization");
  const auto tokens = encode_tokens(mesh, kind, o.rearrange, vocab ? &*vocab : nullptr);
  emit(o, (vocab ? format_ids(tokens.ids) : format_symbols(tokens.ids)) + "\n");
  return 0;
}

int cmd_detokenize(const Options& o) {
  const auto kind = kind_of(o);
  const auto vocab = load_vocab(o);
  const auto text = read_text_file(o.input);
  TokenSequence tokens;
  try {
    tokens.ids = vocab ? parse_ids(text) : parse_symbols(text, kind);
  } catch (const ParseError& e) {
    throw ParseError(o.input + ": " + e.what());
  }
  QuantizedMesh mesh;
  try {
    mesh = decode_tokens(tokens, kind, o.rearrange, vocab ? &*vocab : nullptr, mode_of(o), o.bits);
  } catch (const DecodeError& e) {
    throw DecodeError(o.input + ": " + e.what());
  }
  if (o.lenient) log_line(o.input + ": " + std::to_string(mesh.faces.size()) + " faces decoded");
  emit(o, format_obj(mesh));
  return 0;
}

int cmd_train_vocab(const Options& o, bool sweep) {
  const auto kind = kind_of(o);
  const auto corpus = load_corpus(o.input, o.bits, o.threads);
  for (const auto& s : corpus.skipped) log_line("skipped " + s.name + ": " + s.reason);
  if (corpus.files.empty()) throw Error(o.input + ": no usable meshes");
  auto lines = serialize_corpus(corpus, kind, o.rearrange, o.threads);
  if (lines.size() > 10000) lines.resize(10000);
  const Method method{kind, o.rearrange, true, o.vocab_size};
  const auto vocab = train(lines, kind, o.rearrange, o.vocab_size);

  std::printf("%s: %zu meshes, %zu base symbols, %zu rules learned (target %zu)\n",
              method.name().c_str(), lines.size(), vocab.base_size(), vocab.rules().size(),
              o.vocab_size);
  const auto show = std::min<std::size_t>(5, vocab.rules().size());
  for (std::size_t i = 0; i < show; ++i) {
    const auto& rule = vocab.rules()[i];
    const auto id = static_cast<TokenId>(vocab.base_size() + i);
    std::printf("  rule %zu: %u + %u -> %u [%s] x%llu\n", i, rule.left, rule.right, id,
                format_symbols(vocab.expansion(id)).c_str(),
                static_cast<unsigned long long>(rule.frequency));
  }
  if (!vocab.rules().empty()) {
    std::printf("  last rule frequency %llu\n",
                static_cast<unsigned long long>(vocab.rules().back().frequency));
  }

  if (!sweep) {
    const fs::path out = o.output.empty() ? fs::path(method.id() + ".json") : fs::path(o.output);
    save(vocab, out);
    std::printf("wrote %s\n", out.string().c_str());
  } else {
    const fs::path dir = o.output.empty() ? fs::path("vocab") : fs::path(o.output);
    for (auto size : kVocabSweep) {
      if (size > o.vocab_size) break;
      const Method m{kind, o.rearrange, true, size};
      const auto path = dir / (m.id() + ".json");
      save(vocab.truncated(size), path);
      std::printf("wrote %s\n", path.string().c_str());
    }
  }
  return o.strict && !corpus.skipped.empty() ? kExitMeshFailed : 0;
}

int cmd_analyze(Options o) {
  const auto kind = kind_of(o);
  const fs::path out_root = o.output.empty() ? fs::path("out") : fs::path(o.output);
  if (o.merge && o.vocab.empty()) {
    if (!o.auto_train) throw UsageError("merged configurations need --vocab or --auto-train");
    const auto corpus = load_corpus(o.input, o.bits, o.threads);
    if (corpus.files.empty()) throw Error(o.input + ": no usable meshes");
    auto lines = serialize_corpus(corpus, kind, o.rearrange, o.threads);
    if (lines.size() > 10000) lines.resize(10000);
    const Method m{kind, o.rearrange, true, o.vocab_size};
    const auto path = out_root / "vocab" / (m.id() + ".json");
    save(train(lines, kind, o.rearrange, o.vocab_size), path);
    log_line("trained " + path.string());
    o.vocab = path.string();
  }

  PipelineConfig config;
  config.tokenizer = kind;
  config.rearrange = o.rearrange;
  config.vocab_path = o.vocab;
  config.bits = o.bits;
  config.context_window = o.context_window;
  config.threads = o.threads;
  config.log = log_line;
  const auto result = run_pipeline(o.input, config, out_root);

  const std::vector<EntropyReport> reports{result.report};
  write_text_file(result.output_dir / "histogram.csv", histogram_csv(reports));
  write_text_file(result.output_dir / "usable.csv", usable_csv(reports));

  const std::vector<TableRow> rows{{result.report, std::nullopt, 0}};
  if (o.format == "json") {
    std::cout << report_json(result.report);
  } else if (o.format == "csv") {
    std::cout << rows_csv(rows);
  } else {
    std::cout << format_table(rows);
    std::printf("\n%zu processed, %zu skipped, %zu total; outputs in %s\n",
                result.manifest.processed(), result.manifest.skipped.size(),
                result.manifest.total(), result.output_dir.string().c_str());
  }
  return o.strict && !result.manifest.skipped.empty() ? kExitMeshFailed : 0;
}

int cmd_compare(const Options& o, bool roundtrip_rows, bool sweep, const std::string& vocab_dir) {
  const fs::path out = o.output.empty() ? fs::path("out") / "compare" : fs::path(o.output);
  const auto corpus = load_corpus(o.input, o.bits, o.threads);
  for (const auto& s : corpus.skipped) log_line("skipped " + s.name + ": " + s.reason);
  if (corpus.files.empty()) throw Error(o.input + ": no usable meshes");

  CompareOptions co;
  co.vocab_size = o.vocab_size;
  co.context_window = o.context_window;
  co.sweep = sweep;
  co.roundtrip = roundtrip_rows;
  co.sample_points = o.sample_points;
  co.seed = o.seed;
  co.threads = o.threads;
  co.vocab_dir = vocab_dir.empty() ? out / "vocab" : fs::path(vocab_dir);
  co.log = log_line;
  const auto result = compare(corpus, co);

  std::vector<EntropyReport> reports;
  for (const auto& row : result.rows) reports.push_back(row.report);
  write_text_file(out / "table.txt", format_table(result.rows));
  write_text_file(out / "rows.json", rows_json(result.rows));
  write_text_file(out / "rows.csv", rows_csv(result.rows));
  write_text_file(out / "histogram.csv", histogram_csv(reports));
  write_text_file(out / "usable.csv", usable_csv(reports));
  if (sweep) write_text_file(out / "sweep.csv", sweep_csv(result.sweep));

  if (o.format == "json") {
    std::cout << rows_json(result.rows);
  } else if (o.format == "csv") {
    std::cout << rows_csv(result.rows);
  } else {
    std::printf("%zu meshes (%zu skipped), corpus %s\n\n", corpus.files.size(), corpus.skipped.size(),
                corpus.fingerprint.substr(0, 16).c_str());
    std::cout << format_table(result.rows);
  }

  std::size_t failures = 0;
  for (const auto& row : result.rows) failures += row.roundtrip_failures;
  const bool skipped = o.strict && !corpus.skipped.empty();
  return failures || skipped ? kExitMeshFailed : 0;
}

int cmd_roundtrip(const Options& o) {
  const auto kind = kind_of(o);
  const auto vocab = load_vocab(o);
  const Method method{kind, o.rearrange, vocab.has_value(), vocab ? vocab->size() : 0};

  std::vector<std::pair<std::string, std::optional<QuantizedMesh>>> meshes;
  std::size_t skipped = 0;
  if (fs::is_directory(o.input)) {
    const auto corpus = load_corpus(o.input, o.bits, o.threads);
    for (const auto& s : corpus.skipped) log_line("skipped " + s.name + ": " + s.reason);
    skipped = corpus.skipped.size();
    for (const auto& f : corpus.files) meshes.emplace_back(f.name, f.mesh);
  } else {
    meshes.emplace_back(fs::path(o.input).filename().string(), quantize(read_obj(o.input), o.bits));
  }

  std::size_t failures = 0;
  if (o.format == "csv") std::printf("mesh,faces,identical,chamfer,hausdorff\n");
  for (const auto& [name, mesh] : meshes) {
    if (mesh->faces.empty()) {
      log_line("skipped " + name + ": no faces after quantization");
      ++skipped;
      continue;
    }
    const RoundTripReference ref(*mesh, o.sample_points, o.seed);
    RoundTripResult r;
    try {
      r = roundtrip(ref, method, vocab ? &*vocab : nullptr);
    } catch (const Error& e) {
      log_line(name + ": " + e.what());
      ++failures;
      continue;
    }
    failures += !r.same_face_set;
    if (o.format == "csv") {
      std::printf("%s,%zu,%d,%.6f,%.6f\n", name.c_str(), mesh->faces.size(), r.identical ? 1 : 0,
                  r.distances.chamfer, r.distances.hausdorff);
    } else {
      std::printf("%-32s %s faces=%zu CD=%.6f HD=%.6f %s\n", name.c_str(), method.name().c_str(),
                  mesh->faces.size(), r.distances.chamfer, r.distances.hausdorff,
                  r.identical ? "identical" : r.same_face_set ? "same faces, winding differs" : "DIFFERS");
    }
  }
  const bool skip_fail = !o.lenient && skipped > 0;
  return failures || skip_fail ? kExitMeshFailed : 0;
}

struct SynthOptions {
  std::size_t count = 100;
  std::size_t max_faces = 5000;
  std::string kind;
  std::string base = "icosphere";
  SyntheticParams params;
};

int cmd_gen_synthetic(const Options& o, const SynthOptions& s) {
  if (s.kind.empty()) {
    CorpusOptions co;
    co.max_faces = s.max_faces;
    const auto meshes = generate_corpus(s.count, o.seed, co);
    const fs::path dir = o.output.empty() ? fs::path("corpus") : fs::path(o.output);
    write_corpus(dir, meshes);
    std::printf("wrote %zu meshes to %s\n", meshes.size(), dir.string().c_str());
    return 0;
  }
  const auto kind = parse_synthetic_kind(s.kind);
  if (!kind) throw UsageError("unknown synthetic kind '" + s.kind + "'");
  auto params = s.params;
  const auto base = parse_synthetic_kind(s.base);
  if (!base) throw UsageError("unknown base kind '" + s.base + "'");
  params.base = *base;
  const auto mesh = generate_synthetic(*kind, params, o.seed);
  const fs::path out = o.output.empty() ? fs::path(s.kind + ".obj") : fs::path(o.output);
  write_obj(out, mesh);
  std::printf("wrote %s: %zu vertices, %zu faces\n", out.string().c_str(), mesh.vertices.size(),
              mesh.faces.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mesh tokenizers, coordinate rearrangement, BPE merges and entropy metrics"};
  app.require_subcommand(1);
  Options o;

  auto* tok = app.add_subcommand("tokenize", "OBJ mesh to a symbol or token stream");
  tok->add_option("input", o.input, "OBJ file")->required()->check(CLI::ExistingFile);
  tok->add_option("-o,--output", o.output, "output file (default stdout)");
  add_tokenizer(tok, o);
  add_vocab(tok, o);

  auto* detok = app.add_subcommand("detokenize", "symbol or token stream back to an OBJ mesh");
  detok->add_option("input", o.input, "stream file")->required()->check(CLI::ExistingFile);
  detok->add_option("-o,--output", o.output, "output OBJ (default stdout)");
  add_tokenizer(detok, o);
  add_vocab(detok, o);
  add_mode(detok, o);

  bool sweep_files = false;
  auto* trainer = app.add_subcommand("train-vocab", "learn BPE merges over a corpus");
  trainer->add_option("corpus", o.input, "directory of OBJ files")->required()->check(CLI::ExistingDirectory);
  trainer->add_option("-o,--output", o.output, "vocab file, or directory with --sweep");
  trainer->add_option("--vocab-size", o.vocab_size, "target vocabulary size")->capture_default_str();
  trainer->add_flag("--sweep", sweep_files, "write one file per size in 256..vocab-size");
  trainer->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  add_tokenizer(trainer, o);
  add_mode(trainer, o);

  auto* analyze_cmd = app.add_subcommand("analyze", "entropy report for one configuration");
  analyze_cmd->add_option("corpus", o.input, "directory of OBJ files")->required()->check(CLI::ExistingDirectory);
  analyze_cmd->add_option("-o,--output", o.output, "output root (default out)");
  analyze_cmd->add_flag("-m,--merge", o.merge, "apply BPE merges (MC, or RMC with --rearrange)");
  analyze_cmd->add_flag("--auto-train", o.auto_train, "train the vocabulary when --vocab is absent");
  analyze_cmd->add_option("--vocab-size", o.vocab_size, "size for --auto-train")->capture_default_str();
  analyze_cmd->add_option("--context-window", o.context_window)->capture_default_str();
  analyze_cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  add_tokenizer(analyze_cmd, o);
  add_vocab(analyze_cmd, o);
  add_format(analyze_cmd, o);
  add_mode(analyze_cmd, o);

  bool no_roundtrip = false;
  bool no_sweep = false;
  std::string vocab_dir;
  auto* cmp = app.add_subcommand("compare", "all twelve configurations side by side");
  cmp->add_option("corpus", o.input, "directory of OBJ files")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("-o,--output", o.output, "output directory (default out/compare)");
  cmp->add_option("--vocab-size", o.vocab_size, "merged rows' vocabulary size")->capture_default_str();
  cmp->add_option("--vocab-dir", vocab_dir, "reuse or store vocabularies here");
  cmp->add_option("--context-window", o.context_window)->capture_default_str();
  cmp->add_option("--sample-points", o.sample_points)->capture_default_str();
  cmp->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
  cmp->add_option("--bits", o.bits, "quantization bits")->check(CLI::Range(1, 7))->capture_default_str();
  cmp->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  cmp->add_flag("--no-roundtrip", no_roundtrip, "skip the round-trip CD/HD columns");
  cmp->add_flag("--no-sweep", no_sweep, "skip the vocabulary-size series");
  add_format(cmp, o);
  add_mode(cmp, o);

  auto* rt = app.add_subcommand("roundtrip", "encode, decode and measure CD/HD");
  rt->add_option("input", o.input, "OBJ file or directory")->required()->check(CLI::ExistingPath);
  rt->add_option("--sample-points", o.sample_points)->capture_default_str();
  rt->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
  rt->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  add_tokenizer(rt, o);
  add_vocab(rt, o);
  add_format(rt, o);
  add_mode(rt, o);

  SynthOptions synth;
  auto* gen = app.add_subcommand("gen-synthetic", "write synthetic OBJ meshes");
  gen->add_option("-o,--output", o.output, "corpus directory, or OBJ file with --kind");
  gen->add_option("--count", synth.count, "corpus size")->capture_default_str();
  gen->add_option("--seed", o.seed)->capture_default_str();
  gen->add_option("--max-faces", synth.max_faces)->capture_default_str();
  gen->add_option("--kind", synth.kind, "single mesh: strip, grid, icosphere, torus or noisy");
  gen->add_option("--length", synth.params.length, "strip faces");
  gen->add_option("--rows", synth.params.rows, "grid rows");
  gen->add_option("--cols", synth.params.cols, "grid columns");
  gen->add_option("--terraces", synth.params.terraces, "grid height levels");
  gen->add_option("--subdivisions", synth.params.subdivisions, "icosphere subdivisions");
  gen->add_option("--major", synth.params.major_segments, "torus ring segments");
  gen->add_option("--minor", synth.params.minor_segments, "torus tube segments");
  gen->add_option("--base", synth.base, "noisy base shape");
  gen->add_option("--jitter", synth.params.jitter, "noisy vertex offset");
  gen->add_option("--drop", synth.params.drop_fraction, "noisy face drop fraction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*tok) return cmd_tokenize(o);
    if (*detok) return cmd_detokenize(o);
    if (*trainer) return cmd_train_vocab(o, sweep_files);
    if (*analyze_cmd) return cmd_analyze(o);
    if (*cmp) return cmd_compare(o, !no_roundtrip, !no_sweep, vocab_dir);
    if (*rt) return cmd_roundtrip(o);
    if (*gen) return cmd_gen_synthetic(o, synth);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DecodeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMeshFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
