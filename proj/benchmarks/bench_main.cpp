#include <benchmark/benchmark.h>

#include "lamlab/boehm.hpp"
#include "lamlab/bootcfg.hpp"
#include "lamlab/cl.hpp"
#include "lamlab/combinators.hpp"
#include "lamlab/degoto.hpp"
#include "lamlab/reduce.hpp"
#include "lamlab/rpl.hpp"
#include "lamlab/selfint.hpp"
#include "lamlab/syntax.hpp"
#include "lamlab/tinyvm.hpp"
#include "oracles.hpp"

using namespace lamlab;

namespace {

// Church exponentiation 2^n, normalized in normal order.
void BM_NormalizeChurchPower(benchmark::State& state) {
  Term t = Term::app(church(state.range(0)), church(2));
  for (auto _ : state) benchmark::DoNotOptimize(normal_form(t, Mode::Beta, 10'000'000));
}
BENCHMARK(BM_NormalizeChurchPower)->DenseRange(4, 10, 2);

void BM_ParsePrint(benchmark::State& state) {
  std::mt19937_64 rng(1);
  Term t = testing::random_term(rng, state.range(0));
  std::string text = print_term(t);
  for (auto _ : state) benchmark::DoNotOptimize(print_term(parse_term(text)));
}
BENCHMARK(BM_ParsePrint)->Arg(16)->Arg(256)->Arg(4096);

void BM_Separator(benchmark::State& state) {
  Term m0 = parse_term("\\x y.x y (\\z.z (x y))");
  Term m1 = parse_term("\\x y.x y (\\z.z (y x))");
  for (auto _ : state) benchmark::DoNotOptimize(separator(m0, m1));
}
BENCHMARK(BM_Separator);

void BM_PhiDecode(benchmark::State& state) {
  CLTerm p = parse_cl("((S(KK))(S(KS)))");
  for (auto _ : state) benchmark::DoNotOptimize(phi_decoding_steps(p));
}
BENCHMARK(BM_PhiDecode);

void BM_SelfEvaluate(benchmark::State& state) {
  auto scheme = static_cast<EncodingScheme>(state.range(0));
  Term m = parse_term("\\f x.f (f (f (x (\\y.y f))))");
  for (auto _ : state) benchmark::DoNotOptimize(self_evaluate(scheme, m));
}
BENCHMARK(BM_SelfEvaluate)
    ->Arg(static_cast<int>(EncodingScheme::Mogensen))
    ->Arg(static_cast<int>(EncodingScheme::BerarducciBoehm));

void BM_EliminateGoto(benchmark::State& state) {
  auto corpus = testing::flow_corpus();
  for (auto _ : state) {
    for (const auto& [name, p] : corpus) benchmark::DoNotOptimize(eliminate_goto(p));
  }
}
BENCHMARK(BM_EliminateGoto);

void BM_StructuredRun(benchmark::State& state) {
  FlowProgram p = parse_flow(testing::read_data_file("flow/multiply.flow"));
  StructProgram q = eliminate_goto(p);
  Store s;
  for (const auto& v : p.variables()) s[v] = 20;
  for (auto _ : state) benchmark::DoNotOptimize(interpret_struct(q, s, 10'000'000));
}
BENCHMARK(BM_StructuredRun);

void BM_RplCompile(benchmark::State& state) {
  const Datum& code = toy_registry().program("bench_poly").code;
  auto mode = static_cast<CompileMode>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rpl_compile(code, mode));
}
BENCHMARK(BM_RplCompile)->Arg(static_cast<int>(CompileMode::Plain))->Arg(static_cast<int>(CompileMode::Folding));

void BM_VmRun(benchmark::State& state) {
  VMProgram p = rpl_compile(toy_registry().program("bench_fib").code, CompileMode::Folding);
  for (auto _ : state) benchmark::DoNotOptimize(vm_run(p, {40}, 10'000'000));
}
BENCHMARK(BM_VmRun);

void BM_BootstrapDemo(benchmark::State& state) {
  auto suite = toy_benchmarks();
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_demo(toy_registry(), suite));
}
BENCHMARK(BM_BootstrapDemo)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
