// Serial reference vs OpenMP document analysis on a replicated corpus.

#include <benchmark/benchmark.h>

#include <filesystem>

#include "bootlex/kernels.hpp"
#include "bootlex/pipeline.hpp"

using namespace bootlex;

namespace {

const Resources& resources() {
  static const Resources r = Resources::load(PipelineConfig::defaults(BOOTLEX_RESOURCE_DIR));
  return r;
}

std::vector<RawCorpusFile> corpus(std::size_t copies) {
  std::vector<RawCorpusFile> base;
  for (const char* dir : {"demo", "ontology", "kidney"}) {
    for (auto& f : load_corpus_dir(std::filesystem::path(BOOTLEX_DATA_DIR) / dir)) base.push_back(std::move(f));
  }
  std::vector<RawCorpusFile> out;
  for (std::size_t i = 0; i < copies; ++i) {
    for (const auto& f : base) out.push_back({std::to_string(i) + "_" + f.path, f.text});
  }
  return out;
}

template <auto Kernel>
void run(benchmark::State& state) {
  auto docs = corpus(static_cast<std::size_t>(state.range(0)));
  const auto& r = resources();
  Tagger tagger{r.closed, r.heuristics};
  LexiconView lex;
  AnalysisContext ctx{r.segmentation, tagger, lex, r.grammar, r.patterns, r.exceptions};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(docs, ctx));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}

}  // namespace

BENCHMARK(run<analyze_corpus_serial>)->Name("analyze_corpus/serial")->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(run<analyze_corpus_parallel>)->Name("analyze_corpus/openmp")->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
