// Solver and pipeline hot paths: per-game solves, the aggregated likelihood,
// and a design scan over c.
#include <benchmark/benchmark.h>

#include "centipede/estimate.hpp"
#include "centipede/predict.hpp"
#include "centipede/simulate.hpp"

namespace {

using namespace centipede;

const CentipedeGame& linear_game() {
  static const CentipedeGame game = make_game(default_game_set().front().spec);
  return game;
}

void BM_DchSolve(benchmark::State& state) {
  const Form form = static_cast<Form>(state.range(0));
  const LevelPrior prior = poisson_prior(1.25, static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(dch_solve(linear_game(), form, prior));
}
BENCHMARK(BM_DchSolve)
    ->ArgsProduct({{0, 1, 2}, {10, 50}})
    ->ArgNames({"form", "kmax"});

void BM_QdchSolve(benchmark::State& state) {
  const Form form = static_cast<Form>(state.range(0));
  const LevelPrior prior = poisson_prior(2.60, 50);
  for (auto _ : state)
    benchmark::DoNotOptimize(qdch_solve(linear_game(), form, prior, 0.05));
}
BENCHMARK(BM_QdchSolve)->DenseRange(0, 2)->ArgName("form");

void BM_AqreHomotopy(benchmark::State& state) {
  const Form form = static_cast<Form>(state.range(0));
  const double lambda = static_cast<double>(state.range(1)) / 100.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(aqre_solve(linear_game(), form, lambda));
}
BENCHMARK(BM_AqreHomotopy)
    ->ArgsProduct({{0, 1, 2}, {5, 10}})
    ->ArgNames({"form", "lambda_x100"});

void BM_Loglik(benchmark::State& state) {
  SimConfig sc;
  sc.games = default_game_set();
  sc.forms = {Form::DirectResponse, Form::ReducedStrategy, Form::FullStrategy};
  sc.model = {SolverKind::DCH, 1.25, 0.0, 50};
  sc.subjects_per_role = static_cast<int>(state.range(0));
  sc.seed = 1;
  const Dataset data = simulate(sc);
  const ModelSpec params{SolverKind::DCH, 1.1, 0.0, 50};
  for (auto _ : state)
    benchmark::DoNotOptimize(loglik(SolverKind::DCH, params, data));
}
BENCHMARK(BM_Loglik)->Arg(100)->Arg(1000)->ArgName("subjects");

void BM_DesignScan(benchmark::State& state) {
  std::vector<double> grid;
  for (int i = 0; i <= 80; ++i) grid.push_back(0.1 + 0.01 * i);
  const ModelSpec m{SolverKind::DCH, 1.25, 0.0, 10};
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(design_scan(Family::Constant, m, Form::ReducedStrategy,
                                         Form::DirectResponse, grid, 3, {1.0, 0.0},
                                         {}, threads));
}
BENCHMARK(BM_DesignScan)->Arg(1)->Arg(8)->ArgName("threads");

}  // namespace

BENCHMARK_MAIN();
