// Microbenchmarks: classic vs space-efficient evaluation on the countdown
// program (where the classic mode's monitor pile-up dominates), plus the
// join/drop algebra in isolation.
#include <benchmark/benchmark.h>

#include <string>

#include "cpcf/eval_classic.hpp"
#include "cpcf/eval_space.hpp"
#include "cpcf/harness.hpp"
#include "cpcf/surface.hpp"

using namespace cpcf;

namespace {

TermPtr downToProgram(long n) {
  return parseTermString(
      "let downTo = mu (f : Int -> Int)."
      " mon^l(x : pred(fun x:Int => x >= 0) -> pred[down](fun y:Int => x >= y),"
      "       fun x:Int => if x = 0 then 0 else f (x - 1))"
      " in downTo " +
      std::to_string(n));
}

const RuleSet& downRules() {
  static RuleSet rules = parseRulesString(
      "rule down implies down when x1 <= x2");
  return rules;
}

void BM_ClassicDownTo(benchmark::State& state) {
  TermPtr prog = downToProgram(state.range(0));
  EvalOptions opts;
  opts.fuel = 10000000;
  for (auto _ : state) {
    EvalResult r = evalClassic(prog, opts);
    benchmark::DoNotOptimize(r.outcome.kind);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassicDownTo)->Arg(10)->Arg(100)->Arg(1000)->Complexity();

void BM_EffDownTo(benchmark::State& state) {
  TermPtr prog = downToProgram(state.range(0));
  ImplicationEngine engine{downRules()};
  EvalOptions opts;
  opts.fuel = 10000000;
  for (auto _ : state) {
    EvalResult r = evalEff(prog, engine, opts);
    benchmark::DoNotOptimize(r.outcome.kind);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EffDownTo)->Arg(10)->Arg(100)->Arg(1000)->Complexity();

void BM_JoinBaseStacks(benchmark::State& state) {
  ImplicationEngine eq;
  GenConfig cfg = defaultGenConfig();
  LabeledPtr a = genLabeledBaseContract(cfg, 1, BaseType::Int);
  LabeledPtr b = genLabeledBaseContract(cfg, 2, BaseType::Int);
  for (auto _ : state) {
    LabeledPtr j = joinContracts(a, b, eq);
    benchmark::DoNotOptimize(j);
  }
}
BENCHMARK(BM_JoinBaseStacks);

}  // namespace

BENCHMARK_MAIN();
