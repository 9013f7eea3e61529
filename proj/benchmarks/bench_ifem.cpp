#include <benchmark/benchmark.h>

#include <vector>

#include "ifem/adapt.hpp"
#include "ifem/experiments.hpp"

using namespace ifem;

namespace {

const LevelSetProblem& problem() {
  static const LevelSetProblem p = example_51(1.0, 10.0);
  return p;
}

Mesh mesh_for(int n) { return build_fitted_mesh(problem().ls, problem().domain, n); }

void BM_BuildFittedMesh(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(mesh_for(n));
  st.SetComplexityN(n * n);
}
BENCHMARK(BM_BuildFittedMesh)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& st) {
  const Mesh m = mesh_for(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(assemble(m, problem()));
  st.counters["dof"] = static_cast<double>(m.num_vertices());
}
BENCHMARK(BM_Assemble)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& st) {
  const Mesh m = mesh_for(static_cast<int>(st.range(0)));
  const SparseSystem sys = assemble(m, problem());
  for (auto _ : st) benchmark::DoNotOptimize(solve(sys));
  st.counters["dof"] = static_cast<double>(m.num_vertices());
}
BENCHMARK(BM_Solve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BuildRecovery(benchmark::State& st) {
  const Mesh m = mesh_for(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(build_recovery(m));
}
BENCHMARK(BM_BuildRecovery)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ApplyIppr(benchmark::State& st) {
  const Mesh m = mesh_for(static_cast<int>(st.range(0)));
  const RecoveryOperator op = build_recovery(m);
  const FeSolution uh = solve_problem(m, problem());
  for (auto _ : st) benchmark::DoNotOptimize(ippr_recover(op, uh.minus, uh.plus));
}
BENCHMARK(BM_ApplyIppr)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BisectMarked(benchmark::State& st) {
  const Mesh m = mesh_for(64);
  const FeSolution uh = solve_problem(m, problem());
  const Evaluation ev = evaluate(m, problem(), uh);
  const std::vector<int> marked = dorfler_mark(ev.indicators.eta, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(bisect(m, marked, problem().ls));
  st.counters["marked"] = static_cast<double>(marked.size());
}
BENCHMARK(BM_BisectMarked)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
