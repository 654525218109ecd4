#include "pdecol/derivatives.hpp"
#include "pdecol/fem.hpp"
#include "pdecol/problems.hpp"
#include "pdecol/study.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace pdecol;

namespace {

MeshConfig mesh(int nt, int intervals, int nx) { return {nt, intervals, nx, 1, 3, RadauKind::Flipped}; }

void BM_AssembleOperators(benchmark::State& state)
{
  const SpatialGrid g = spatial_grid_from_nodes(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_operators(g));
}
BENCHMARK(BM_AssembleOperators)->Arg(34)->Arg(272);

void BM_FlippedRadauRule(benchmark::State& state)
{
  for (auto _ : state) benchmark::DoNotOptimize(flipped_lgr_rule(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FlippedRadauRule)->Arg(5)->Arg(20);

void BM_Constraints(benchmark::State& state)
{
  const auto tr = build_transcription(burgers_problem(), mesh(5, 3, static_cast<int>(state.range(0))));
  const Eigen::VectorXd z = tr->default_initial_guess();
  Eigen::VectorXd c;
  for (auto _ : state) {
    tr->constraints(z, c);
    benchmark::DoNotOptimize(c.data());
  }
}
BENCHMARK(BM_Constraints)->Arg(34)->Arg(136);

void BM_JacobianValues(benchmark::State& state)
{
  const auto tr = build_transcription(burgers_problem(), mesh(5, 3, static_cast<int>(state.range(0))));
  const Eigen::VectorXd z = tr->default_initial_guess();
  std::vector<double> v(tr->jacobian_pattern().nnz());
  for (auto _ : state) {
    tr->jacobian_values(z, v);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_JacobianValues)->Arg(34)->Arg(136);

void BM_HessianValues(benchmark::State& state)
{
  const auto tr = build_transcription(heat_problem(false), mesh(7, 3, static_cast<int>(state.range(0))));
  const Eigen::VectorXd z = tr->default_initial_guess();
  const Eigen::VectorXd lambda = Eigen::VectorXd::Ones(tr->n_constraints());
  std::vector<double> v(tr->hessian_pattern().nnz());
  for (auto _ : state) {
    tr->hessian_values(z, 1.0, lambda, v);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_HessianValues)->Arg(20)->Arg(50);

void BM_SolveBurgersMesh1(benchmark::State& state)
{
  RunConfig c;
  for (auto _ : state) benchmark::DoNotOptimize(solve_benchmark(c).report.objective);
}
BENCHMARK(BM_SolveBurgersMesh1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
