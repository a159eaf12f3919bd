#include <benchmark/benchmark.h>

#include <string>

#include "fever_forge/pattern.hpp"

using fever_forge::Pattern;

namespace {

void BM_CompileDirectedBy(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(Pattern::compile("(.+) (?:was |is )?directed by (.+)"));
  }
}
BENCHMARK(BM_CompileDirectedBy);

void BM_MatchDirectedBy(benchmark::State& state) {
  const Pattern pattern = Pattern::compile("(.+) (?:was |is )?directed by (.+)");
  const std::string claim = "Bullitt is a movie directed by Phillip D'Antoni";
  for (auto _ : state) benchmark::DoNotOptimize(pattern.match(claim));
}
BENCHMARK(BM_MatchDirectedBy);

void BM_MatchMiss(benchmark::State& state) {
  const Pattern pattern = Pattern::compile("(.+) was born in (.+)");
  const std::string claim = "Steve McQueen starred in a film about a San Francisco police detective";
  for (auto _ : state) benchmark::DoNotOptimize(pattern.match(claim));
}
BENCHMARK(BM_MatchMiss);

// Two greedy groups over a subject of growing length.
void BM_MatchLongSubject(benchmark::State& state) {
  const Pattern pattern = Pattern::compile("(.+) is a (.+)");
  std::string subject(static_cast<std::size_t>(state.range(0)), 'x');
  subject += " is a film";
  for (auto _ : state) benchmark::DoNotOptimize(pattern.match(subject));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MatchLongSubject)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

}  // namespace
