#include <benchmark/benchmark.h>

#include <vector>

#include "ofp/autodiff.hpp"
#include "ofp/corpus.hpp"
#include "ofp/expr.hpp"

namespace {

const ofp::FunctionDef& motivating() { return ofp::find_entry("sin_shift")->function; }

void BM_Parse(benchmark::State& state) {
  const std::string source = ofp::pretty_print(motivating());
  for (auto _ : state) benchmark::DoNotOptimize(ofp::parse(source));
}
BENCHMARK(BM_Parse);

void BM_Evaluate(benchmark::State& state) {
  const std::vector<double> p{2.13, 1e-6};
  for (auto _ : state) benchmark::DoNotOptimize(ofp::evaluate(motivating(), p));
}
BENCHMARK(BM_Evaluate);

void BM_EvalWorkingTrace(benchmark::State& state) {
  const std::vector<double> p{2.13, 1e-6};
  for (auto _ : state) benchmark::DoNotOptimize(ofp::eval_working(motivating(), p));
}
BENCHMARK(BM_EvalWorkingTrace);

// Derivative order on the range axis; tree growth dominates.
void BM_NthDerivative(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ofp::nth_derivative(motivating(), 1, order));
}
BENCHMARK(BM_NthDerivative)->DenseRange(1, 9, 4);

}  // namespace
