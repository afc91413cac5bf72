#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "flw/derivation.hpp"
#include "flw/encode.hpp"
#include "flw/lcs.hpp"
#include "flw/order.hpp"
#include "flw/saturate.hpp"
#include "flw/sequent.hpp"

namespace {

using namespace flw;

const char* kSystem = R"(states: q1 q2
channels: c1
alphabet: a
q1 c1 a ? q2
q2 c1 a ! q2
)";

static void BM_ParseSequent(benchmark::State& state) {
  for (auto _ : state) {
    Sequent s = parse_sequent("Q1,s1,A,A,e1 |- Q2*(s1*(A*(A*e1)))");
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_ParseSequent);

static void BM_SequentEmbed(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<Formula> phi = {Formula::var("p"), Formula::var("q"), Formula::var("r")};
  std::vector<Sequent> pool;
  for (int i = 0; i < 64; ++i) {
    Sequent s;
    std::size_t len = rng() % 6;
    for (std::size_t k = 0; k < len; ++k) s.antecedent.push_back(phi[rng() % 3]);
    s.succedent = phi[rng() % 3];
    pool.push_back(s);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    bool e = seq_embed(pool[i % 64], pool[(i * 31 + 7) % 64]);
    benchmark::DoNotOptimize(e);
    ++i;
  }
}
BENCHMARK(BM_SequentEmbed);

static void BM_SaturateTransitiveChain(benchmark::State& state) {
  Theory th = parse_theory("p |- q\nq |- r\nr |- s\n");
  Sequent goal = parse_sequent("p |- s");
  std::vector<Sequent> pool = th;
  pool.push_back(goal);
  std::vector<Formula> phi = subformula_closure(pool);
  Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
  std::vector<Sequent> goals{goal};
  for (auto _ : state) {
    Verdict v = decide(calc, th, phi, goals);
    benchmark::DoNotOptimize(v.yes);
  }
}
BENCHMARK(BM_SaturateTransitiveChain);

static void BM_ReachExact(benchmark::State& state) {
  ChannelSystem cs = parse_lcs(kSystem);
  Configuration u = parse_config(cs, "q1 : a a");
  Configuration v = parse_config(cs, "q2 : a a a");
  for (auto _ : state) {
    bool r = reach_exact(cs, u, v);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ReachExact);

static void BM_Reduce(benchmark::State& state) {
  ChannelSystem cs = parse_lcs(kSystem);
  Configuration u = parse_config(cs, "q1 : a a");
  Configuration v = parse_config(cs, "q2 : a");
  for (auto _ : state) {
    EncodedInstance inst = reduce(cs, u, v);
    benchmark::DoNotOptimize(inst.theory.size());
  }
}
BENCHMARK(BM_Reduce);

static void BM_CompileAndCheck(benchmark::State& state) {
  ChannelSystem cs = parse_lcs(kSystem);
  Configuration u = parse_config(cs, "q1 : a a");
  std::vector<TraceStep> steps = {TraceStep::perfect(0), TraceStep::perfect(1)};
  Calculus calc = builtin_calculus(Fragment::of({Conn::Fuse}));
  Theory th = theory_of(cs);
  for (auto _ : state) {
    Derivation d = compile_computation(cs, u, steps);
    CheckReport rep = check_deduction(calc, th, d);
    benchmark::DoNotOptimize(rep.valid);
  }
}
BENCHMARK(BM_CompileAndCheck);

} // namespace

BENCHMARK_MAIN();
