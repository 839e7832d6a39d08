#include <benchmark/benchmark.h>

#include "apml/parse.hpp"
#include "apml/scenarios.hpp"
#include "apml/search.hpp"
#include "apml/semantics.hpp"
#include "apml/transform.hpp"

namespace {

using namespace apml;

void BM_ProveDuplication(benchmark::State& state) {
  const Sequent s = parse_sequent("<A>[A](p | q) |- (p & <A>[A](p | q)) | (q & <A>[A](p | q))");
  for (auto _ : state) benchmark::DoNotOptimize(prove(s));
}
BENCHMARK(BM_ProveDuplication);

void BM_ProveDiamondJoin(benchmark::State& state) {
  const Sequent s = parse_sequent("<A>(p | q | r) |- <A>p | <A>q | <A>r");
  for (auto _ : state) benchmark::DoNotOptimize(prove(s));
}
BENCHMARK(BM_ProveDiamondJoin);

void BM_BoundedFailure(benchmark::State& state) {
  const Sequent s = parse_sequent("[A]p |- p");
  SearchConfig c;
  c.max_depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prove(s, c));
}
BENCHMARK(BM_BoundedFailure)->Arg(10)->Arg(100);

void BM_Countermodel(benchmark::State& state) {
  const Sequent s = parse_sequent("<A>p & <A>q |- <A>(p & q)");
  for (auto _ : state) benchmark::DoNotOptimize(find_countermodel(s));
}
BENCHMARK(BM_Countermodel);

void BM_DecideRefuted(benchmark::State& state) {
  const Sequent s = parse_sequent("<A>[B]p |- [B]<A>p");
  for (auto _ : state) benchmark::DoNotOptimize(decide(s));
}
BENCHMARK(BM_DecideRefuted);

void BM_EliminateCut(benchmark::State& state) {
  const Derivation d1 = prove(parse_sequent("<A>(p | q), r |- <A>p | <A>q")).derivation;
  const Derivation d2 = prove(parse_sequent("<A>p | <A>q |- <A>q | <A>(p | s)")).derivation;
  const Occurrence occ{Path{}, 0};
  for (auto _ : state) benchmark::DoNotOptimize(eliminate_cut(d1, d2, occ));
}
BENCHMARK(BM_EliminateCut);

void BM_MuddyConfig(benchmark::State& state) {
  MuddyConfig c;
  c.n = static_cast<int>(state.range(0));
  c.k = c.n;
  c.round = {MuddyRound::AfterRound, c.n - 1};
  for (int w = 1; w <= 3; ++w) canonical_frames(w, {Agent("1"), Agent("2")});
  for (auto _ : state) {
    SearchConfig sc;
    sc.assumptions = build_assumptions(c);
    for (const auto& q : build_queries(c)) benchmark::DoNotOptimize(decide(q.sequent, sc));
  }
}
BENCHMARK(BM_MuddyConfig)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_LawsThreeWorlds(benchmark::State& state) {
  const std::vector<Agent> agents{Agent("A")};
  for (auto _ : state) {
    std::size_t bad = 0;
    for (const auto& f : canonical_frames(3, agents)) bad += dlam_validate(complex_algebra(f)).violations.size();
    benchmark::DoNotOptimize(bad);
  }
}
BENCHMARK(BM_LawsThreeWorlds)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
