#include <benchmark/benchmark.h>

#include <map>
#include <numeric>
#include <vector>

#include "gqs/construction.hpp"
#include "gqs/instance_io.hpp"
#include "gqs/solver.hpp"
#include "gqs/suboptimizer.hpp"
#include "gqs/tabu_search.hpp"
#include "gqs/variable_choice.hpp"

namespace {

using namespace gqs;

const QuboProblem& instance(std::size_t n) {
  static std::map<std::size_t, QuboProblem> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, generate_random(n, 0.1, -100, 100, n)).first;
  return it->second;
}

std::vector<Index> all_indices(std::size_t n) {
  std::vector<Index> v(n);
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

void BM_Evaluate(benchmark::State& st) {
  const auto& q = instance(st.range(0));
  Rng rng(1);
  const auto bits = random_bits(q.size(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(evaluate(q, bits));
}
BENCHMARK(BM_Evaluate)->Arg(500)->Arg(2500);

void BM_InitGains(benchmark::State& st) {
  const auto& q = instance(st.range(0));
  Rng rng(1);
  const auto bits = random_bits(q.size(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(GainsState(q, bits));
}
BENCHMARK(BM_InitGains)->Arg(500)->Arg(2500);

void BM_ApplyFlip(benchmark::State& st) {
  const auto& q = instance(st.range(0));
  Rng rng(2);
  GainsState s(q, random_bits(q.size(), rng));
  Index i = 0;
  for (auto _ : st) {
    s.apply_flip(i);
    i = (i + 7) % q.size();
  }
}
BENCHMARK(BM_ApplyFlip)->Arg(500)->Arg(2500);

void BM_ProjectSubproblem(benchmark::State& st) {
  const auto& q = instance(2500);
  Rng rng(3);
  const GainsState s(q, random_bits(q.size(), rng));
  const auto cand = all_indices(q.size());
  const auto idx = choose_random({cand, s}, st.range(0), rng);
  for (auto _ : st) benchmark::DoNotOptimize(project_subproblem(q, s, idx));
}
BENCHMARK(BM_ProjectSubproblem)->Arg(25)->Arg(50)->Arg(200);

void BM_ChooseVariables(benchmark::State& st) {
  const auto& q = instance(2500);
  Rng rng(4);
  const GainsState s(q, random_bits(q.size(), rng));
  const auto cand = all_indices(q.size());
  const auto kind = static_cast<ChoiceKind>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(choose_variables(kind, {cand, s}, 50, rng));
  st.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_ChooseVariables)
    ->Arg(static_cast<int>(ChoiceKind::random))
    ->Arg(static_cast<int>(ChoiceKind::gains))
    ->Arg(static_cast<int>(ChoiceKind::weighted_gains))
    ->Arg(static_cast<int>(ChoiceKind::coupling));

void BM_TabuOracle(benchmark::State& st) {
  const auto& q = instance(2500);
  Rng rng(5);
  const GainsState s(q, random_bits(q.size(), rng));
  const auto cand = all_indices(q.size());
  const std::size_t k = st.range(0);
  const auto sub = project_subproblem(q, s, choose_random({cand, s}, k, rng));
  const Tabu1OptOracle oracle(std::min<std::size_t>(17, k / 2), 10 * k);
  for (auto _ : st) benchmark::DoNotOptimize(oracle.solve(sub, rng));
}
BENCHMARK(BM_TabuOracle)->Arg(25)->Arg(50)->Arg(200);

void BM_ExhaustiveOracle(benchmark::State& st) {
  const auto& q = instance(500);
  Rng rng(6);
  const GainsState s(q, random_bits(q.size(), rng));
  const auto cand = all_indices(q.size());
  const auto sub = project_subproblem(q, s, choose_random({cand, s}, st.range(0), rng));
  const ExhaustiveOracle oracle;
  for (auto _ : st) benchmark::DoNotOptimize(oracle.solve(sub, rng));
}
BENCHMARK(BM_ExhaustiveOracle)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_DeterministicGreedy(benchmark::State& st) {
  const auto& q = instance(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(deterministic_greedy(q));
}
BENCHMARK(BM_DeterministicGreedy)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_TabuSearch(benchmark::State& st) {
  const auto& q = instance(500);
  Rng rng(7);
  const auto start = random_bits(q.size(), rng);
  for (auto _ : st) {
    GainsState s(q, start);
    benchmark::DoNotOptimize(tabu_search(s, {20, 2500, 1e-8}));
  }
}
BENCHMARK(BM_TabuSearch)->Unit(benchmark::kMillisecond);

// Fixed number of decomposition steps per solve.
void BM_Solve(benchmark::State& st) {
  const auto& q = instance(st.range(0));
  SolverParams p;
  p.k = 50;
  p.stop.max_iterations = 100;
  for (auto _ : st) benchmark::DoNotOptimize(solve(q, p));
  st.SetItemsProcessed(st.iterations() * 100);
}
BENCHMARK(BM_Solve)->Arg(500)->Arg(2500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
