#include "meshtok/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cctype>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "detail/json_report.hpp"
#include "meshtok/codec.hpp"
#include "meshtok/error.hpp"
#include "meshtok/obj_io.hpp"

namespace fs = std::filesystem;

namespace meshtok {

namespace {

constexpr std::string_view kCacheFormat = "meshtok-cache 1";

struct Slot {
  bool ok = false;
  std::string reason;
  std::string sha256;
  std::size_t faces = 0;
  std::vector<SymbolId> symbols;
};

fs::path resolve_cache_dir(const PipelineConfig& config) {
  if (!config.cache_dir.empty()) return config.cache_dir;
  if (const char* env = std::getenv(kCacheDirEnv); env != nullptr && *env != '\0') return env;
  return {};
}

std::string cache_key(const std::string& file_hash, const PipelineConfig& config) {
  std::ostringstream key;
  key << kCacheFormat << '|' << file_hash << '|' << to_string(config.tokenizer) << '|'
      << config.rearrange << '|' << config.bits;
  return sha256_hex(key.str());
}

bool read_cache(const fs::path& path, Slot& slot, TokenizerKind kind) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return false;
  try {
    const auto text = read_text_file(path);
    std::istringstream in(text);
    std::string header;
    std::string symbols;
    std::getline(in, header);
    if (header != kCacheFormat) return false;
    if (!(in >> slot.faces)) return false;
    in.ignore(1);
    std::getline(in, symbols);
    slot.symbols = parse_symbols(symbols, kind);
    slot.ok = true;
    return true;
  } catch (const std::exception&) {
    return false;  // unreadable entries are recomputed
  }
}

void write_cache(const fs::path& path, const Slot& slot) {
  const auto tmp = path.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  std::ostringstream out;
  out << kCacheFormat << '\n' << slot.faces << '\n' << format_symbols(slot.symbols) << '\n';
  try {
    write_text_file(tmp, out.str());
    fs::rename(tmp, path);
  } catch (const std::exception&) {
    std::error_code ec;
    fs::remove(tmp, ec);  // a cache that cannot be written is only slower
  }
}

std::string fingerprint_of(const std::vector<std::pair<std::string, std::string>>& named_hashes) {
  std::string buf;
  for (const auto& [name, hash] : named_hashes) {
    buf += name;
    buf += '\0';
    buf += hash;
    buf += '\n';
  }
  return sha256_hex(buf);
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    while (!failed.load()) {
      const auto i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<fs::path> list_obj_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("not a readable directory: " + dir.string());
  std::vector<fs::path> out;
  fs::directory_iterator it(dir, ec);
  if (ec) throw Error("cannot read directory " + dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".obj") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

LoadedCorpus load_corpus(const fs::path& dir, int bits, std::size_t threads) {
  const auto paths = list_obj_files(dir);
  struct Loaded {
    bool ok = false;
    std::string reason;
    CorpusFile file;
  };
  std::vector<Loaded> slots(paths.size());
  parallel_for(paths.size(), threads, [&](std::size_t i) {
    auto& s = slots[i];
    s.file.name = paths[i].filename().string();
    std::string text;
    try {
      text = read_text_file(paths[i]);
    } catch (const std::exception& e) {
      s.reason = e.what();
      return;
    }
    s.file.sha256 = sha256_hex(text);
    try {
      s.file.mesh = quantize(parse_obj(text), bits, &s.file.cleanup);
      if (s.file.mesh.faces.empty()) {
        s.reason = "no faces after quantization";
        return;
      }
      s.ok = true;
    } catch (const std::exception& e) {
      s.reason = e.what();
    }
  });

  LoadedCorpus out;
  std::vector<std::pair<std::string, std::string>> hashes;
  for (auto& s : slots) {
    hashes.emplace_back(s.file.name, s.file.sha256);
    if (s.ok) {
      out.files.push_back(std::move(s.file));
    } else {
      out.skipped.push_back({s.file.name, s.reason});
    }
  }
  out.fingerprint = fingerprint_of(hashes);
  return out;
}

std::string PipelineConfig::config_id(std::string_view vocab_hash) const {
  std::string id(to_string(tokenizer));
  for (auto& c : id) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (rearrange) id += "-rac";
  id += "-b" + std::to_string(bits) + "-w" + std::to_string(context_window);
  if (!vocab_hash.empty()) id += "-v" + std::string(vocab_hash.substr(0, 12));
  return id;
}

PipelineResult run_pipeline(const fs::path& corpus_dir, const PipelineConfig& config,
                            const fs::path& out_root) {
  if (config.bits < 1 || config.bits > 7) throw Error("tokenizers need bits in [1, 7]");

  MergeVocabulary vocab(config.tokenizer, config.rearrange);
  std::string vocab_hash;
  if (!config.vocab_path.empty()) {
    const auto text = read_text_file(config.vocab_path);
    vocab = vocab_from_json(text);
    check_vocab(vocab, config.tokenizer, config.rearrange);
    vocab_hash = sha256_hex(text);
  }

  const auto paths = list_obj_files(corpus_dir);
  const auto cache_dir = resolve_cache_dir(config);
  if (!cache_dir.empty()) fs::create_directories(cache_dir);

  std::vector<Slot> slots(paths.size());
  std::atomic<std::size_t> hits{0};
  parallel_for(paths.size(), config.threads, [&](std::size_t i) {
    auto& s = slots[i];
    std::string text;
    try {
      text = read_text_file(paths[i]);
    } catch (const std::exception& e) {
      s.reason = e.what();
      return;
    }
    s.sha256 = sha256_hex(text);
    fs::path entry;
    if (!cache_dir.empty()) {
      entry = cache_dir / (cache_key(s.sha256, config) + ".sym");
      if (read_cache(entry, s, config.tokenizer)) {
        ++hits;
        return;
      }
    }
    try {
      const auto mesh = quantize(parse_obj(text), config.bits);
      if (mesh.faces.empty()) {
        s.reason = "no faces after quantization";
        return;
      }
      s.faces = mesh.faces.size();
      s.symbols = serialize(mesh, config.tokenizer, config.rearrange);
      s.ok = true;
    } catch (const std::exception& e) {
      s.reason = e.what();
      return;
    }
    if (!entry.empty()) write_cache(entry, s);
  });

  PipelineResult result;
  result.cache_hits = hits.load();
  auto& man = result.manifest;
  man.config_id = config.config_id(vocab_hash);
  man.tokenizer = config.tokenizer;
  man.rearrange = config.rearrange;
  man.vocab_file = config.vocab_path.empty() ? "" : config.vocab_path.filename().string();
  man.vocab_sha256 = vocab_hash;
  man.vocab_size = vocab.size();
  man.bits = config.bits;
  man.context_window = config.context_window;

  std::vector<std::pair<std::string, std::string>> hashes;
  std::vector<std::size_t> raw_lengths;
  std::vector<std::vector<SymbolId>> symbols;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    auto& s = slots[i];
    const auto name = paths[i].filename().string();
    hashes.emplace_back(name, s.sha256);
    if (!s.ok) {
      man.skipped.push_back({name, s.reason});
      if (config.log) config.log("skipped " + name + ": " + s.reason);
      continue;
    }
    ManifestEntry e;
    e.path = name;
    e.sha256 = s.sha256;
    e.faces = s.faces;
    e.raw_length = 9 * s.faces;
    e.symbol_length = s.symbols.size();
    man.meshes.push_back(std::move(e));
    raw_lengths.push_back(9 * s.faces);
    symbols.push_back(std::move(s.symbols));
    names.push_back(paths[i].stem().string());
  }
  man.fingerprint = fingerprint_of(hashes);

  std::vector<TokenSequence> tokens(symbols.size());
  parallel_for(symbols.size(), config.threads,
               [&](std::size_t i) { tokens[i] = meshtok::apply(vocab, symbols[i]); });
  for (std::size_t i = 0; i < tokens.size(); ++i) man.meshes[i].token_length = tokens[i].size();

  const Method method{config.tokenizer, config.rearrange, !vocab.rules().empty(), vocab.size()};
  result.report = analyze(method.name(), raw_lengths, symbols, tokens, vocab, config.context_window);

  result.output_dir = out_root / man.config_id;
  const auto token_dir = result.output_dir / "tokens";
  std::error_code ec;
  fs::remove_all(token_dir, ec);
  fs::create_directories(token_dir);
  const bool ids = !vocab.rules().empty();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto line = ids ? format_ids(tokens[i].ids) : format_symbols(tokens[i].ids);
    write_text_file(token_dir / (names[i] + ".txt"), line + "\n");
  }
  write_text_file(result.output_dir / "manifest.json", manifest_json(man));

  nlohmann::ordered_json report;
  report["config_id"] = man.config_id;
  report["fingerprint"] = man.fingerprint;
  report["total"] = man.total();
  report["processed"] = man.processed();
  report["skipped"] = man.skipped.size();
  report["report"] = detail::report_to_json(result.report, true);
  write_text_file(result.output_dir / "report.json", report.dump(2) + "\n");
  return result;
}

std::string manifest_json(const CorpusManifest& m) {
  nlohmann::ordered_json j;
  j["format"] = "meshtok-manifest";
  j["version"] = 1;
  j["config_id"] = m.config_id;
  j["fingerprint"] = m.fingerprint;
  j["config"] = {{"tokenizer", std::string(to_string(m.tokenizer))},
                 {"rearrange", m.rearrange},
                 {"vocab_file", m.vocab_file},
                 {"vocab_sha256", m.vocab_sha256},
                 {"vocab_size", m.vocab_size},
                 {"bits", m.bits},
                 {"context_window", m.context_window}};
  j["total"] = m.total();
  j["processed"] = m.processed();
  auto meshes = nlohmann::ordered_json::array();
  for (const auto& e : m.meshes) {
    meshes.push_back({{"path", e.path},
                      {"sha256", e.sha256},
                      {"faces", e.faces},
                      {"lengths",
                       {{"raw", e.raw_length}, {"symbols", e.symbol_length}, {"tokens", e.token_length}}}});
  }
  j["meshes"] = std::move(meshes);
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& s : m.skipped) skipped.push_back({{"path", s.name}, {"reason", s.reason}});
  j["skipped"] = std::move(skipped);
  return j.dump(2) + "\n";
}

}  // namespace meshtok
