#include <benchmark/benchmark.h>

#include <vector>

#include "meshtok/codec.hpp"
#include "meshtok/geom_metrics.hpp"
#include "meshtok/synthetic.hpp"
#include "meshtok/tokenizers.hpp"
#include "meshtok/vocab.hpp"

using namespace meshtok;

namespace {

QuantizedMesh torus(std::size_t major) {
  SyntheticParams p;
  p.major_segments = major;
  p.minor_segments = major / 2;
  return quantize(generate_synthetic(SyntheticKind::Torus, p, 1));
}

const std::vector<std::vector<SymbolId>>& training_lines() {
  static const auto lines = [] {
    CorpusOptions o;
    o.max_faces = 2000;
    std::vector<std::vector<SymbolId>> out;
    for (const auto& m : generate_corpus(100, 4, o)) {
      const auto q = quantize(m.mesh);
      if (!q.faces.empty()) out.push_back(serialize(q, TokenizerKind::Edr, true));
    }
    return out;
  }();
  return lines;
}

void BM_Encode(benchmark::State& state, TokenizerKind kind) {
  const auto mesh = torus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(encode(kind, mesh));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mesh.faces.size()));
}
BENCHMARK_CAPTURE(BM_Encode, raw, TokenizerKind::Raw)->Arg(32)->Arg(96);
BENCHMARK_CAPTURE(BM_Encode, amt, TokenizerKind::Amt)->Arg(32)->Arg(96);
BENCHMARK_CAPTURE(BM_Encode, edr, TokenizerKind::Edr)->Arg(32)->Arg(96);

void BM_Decode(benchmark::State& state, TokenizerKind kind) {
  const auto seq = encode(kind, torus(96));
  for (auto _ : state) benchmark::DoNotOptimize(decode(seq));
}
BENCHMARK_CAPTURE(BM_Decode, amt, TokenizerKind::Amt);
BENCHMARK_CAPTURE(BM_Decode, edr, TokenizerKind::Edr);

void BM_TrainBpe(benchmark::State& state) {
  const auto& lines = training_lines();
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(lines, TokenizerKind::Edr, true, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_TrainBpe)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_ApplyBpe(benchmark::State& state) {
  const auto& lines = training_lines();
  const auto vocab = train(lines, TokenizerKind::Edr, true, 8192);
  std::int64_t symbols = 0;
  for (auto _ : state) {
    for (const auto& l : lines) {
      benchmark::DoNotOptimize(meshtok::apply(vocab, l));
      symbols += static_cast<std::int64_t>(l.size());
    }
  }
  state.SetItemsProcessed(symbols);
}
BENCHMARK(BM_ApplyBpe)->Unit(benchmark::kMillisecond);

void BM_Chamfer(benchmark::State& state) {
  const auto mesh = torus(64);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = sample_surface(mesh, n, 1);
  const auto b = sample_surface(mesh, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(set_distances(a, b));
}
BENCHMARK(BM_Chamfer)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
