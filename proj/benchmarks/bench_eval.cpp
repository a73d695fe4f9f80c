#include <benchmark/benchmark.h>

#include <vector>

#include "ofp/corpus.hpp"
#include "ofp/eval.hpp"
#include "ofp/oracle.hpp"

namespace {

void BM_Oracle(benchmark::State& state) {
  const ofp::CorpusEntry& e = *ofp::find_entry("sin_shift");
  const long bits = static_cast<long>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ofp::eval_extended(e.function, e.peak, bits));
}
BENCHMARK(BM_Oracle)->Arg(128)->Arg(256)->Arg(1024);

void BM_Measure(benchmark::State& state) {
  const ofp::CorpusEntry& e = *ofp::find_entry("sin_shift");
  const ofp::TaylorPatch patch =
      ofp::synthesize_patch(e.function, e.region.center, e.region.var, e.region.radius).patch();
  ofp::MeasureOptions options;
  options.n_stable = options.n_decayed = static_cast<std::size_t>(state.range(0));
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ofp::measure(e.function, &patch, e.region, options));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_Measure)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
