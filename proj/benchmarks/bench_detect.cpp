#include <benchmark/benchmark.h>

#include <vector>

#include "ofp/corpus.hpp"
#include "ofp/detect.hpp"

namespace {

void BM_AtomicConditions(benchmark::State& state) {
  const ofp::CorpusEntry& e = *ofp::find_entry("sin_shift");
  const ofp::EvalTrace trace = ofp::eval_working(e.function, e.peak).trace;
  for (auto _ : state) benchmark::DoNotOptimize(ofp::max_atomic_condition(trace));
}
BENCHMARK(BM_AtomicConditions);

void BM_Classify(benchmark::State& state) {
  const ofp::CorpusEntry& e = *ofp::find_entry("sin_shift");
  for (auto _ : state) benchmark::DoNotOptimize(ofp::classify(e.function, e.peak));
}
BENCHMARK(BM_Classify);

void BM_Search(benchmark::State& state) {
  const ofp::CorpusEntry& e = *ofp::find_entry("sin_shift");
  ofp::SearchOptions options;
  options.budget = static_cast<std::size_t>(state.range(0));
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ofp::search_error_inputs(e.function, options));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Search)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

}  // namespace
