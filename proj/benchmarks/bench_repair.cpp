#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "ofp/corpus.hpp"
#include "ofp/repair.hpp"

namespace {

const char* const kEntries[] = {"sin_shift", "sqrt_gap", "one_minus_cos", "log1p_ratio"};

void BM_Synthesize(benchmark::State& state) {
  const ofp::CorpusEntry& e = *ofp::find_entry(kEntries[state.range(0)]);
  state.SetLabel(e.id);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ofp::synthesize_patch(e.function, e.region.center, e.region.var, e.region.radius));
  }
}
BENCHMARK(BM_Synthesize)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_EvalPatch(benchmark::State& state) {
  const ofp::CorpusEntry& e = *ofp::find_entry("sin_shift");
  const ofp::TaylorPatch patch =
      ofp::synthesize_patch(e.function, e.region.center, e.region.var, e.region.radius).patch();
  const std::vector<double> p{2.13, 1e-6};
  for (auto _ : state) benchmark::DoNotOptimize(ofp::eval_patch(patch, p));
}
BENCHMARK(BM_EvalPatch);

}  // namespace
