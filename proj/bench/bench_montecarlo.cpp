// Serial reference vs OpenMP Monte-Carlo runner on the same plan, plus the
// per-step cost of single episodes.

#include <benchmark/benchmark.h>

#include <memory>

#include "ellbandit/montecarlo.hpp"
#include "ellbandit/runtime.hpp"

using namespace ellbandit;

namespace {

MonteCarloPlan make_plan(std::size_t d, std::size_t runs) {
  MonteCarloPlan plan;
  auto ball = std::make_shared<const EllipsoidSet>(EllipsoidSet::ball(static_cast<Eigen::Index>(d)));
  for (double norm : {0.1, 1.0, 10.0}) {
    VectorXd theta = VectorXd::Ones(static_cast<Eigen::Index>(d));
    theta *= norm / theta.norm();
    plan.scenarios.push_back({"norm", ball, {theta, {NoiseKind::Gaussian, 1.0}}});
  }
  plan.policies = {parse_policy_spec("e2tc:1"), parse_policy_spec("e2tc:3")};
  plan.horizon = 10000;
  plan.runs = runs;
  plan.base_seed = 1;
  return plan;
}

void BM_RunTasksSerial(benchmark::State& state) {
  const MonteCarloPlan plan = make_plan(static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(run_tasks_serial(plan));
  state.SetItemsProcessed(state.iterations() * 3 * 2 * 16 * 10000);
}

void BM_RunTasksParallel(benchmark::State& state) {
  const MonteCarloPlan plan = make_plan(static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(run_tasks_parallel(plan));
  state.SetItemsProcessed(state.iterations() * 3 * 2 * 16 * 10000);
}

void BM_Episode(benchmark::State& state, const char* policy) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto horizon = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(runtime_probe(parse_policy_spec(policy), d, horizon));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(horizon));
}

}  // namespace

BENCHMARK(BM_RunTasksSerial)->Arg(3)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RunTasksParallel)->Arg(3)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Episode, e2tc, "e2tc")->Args({50, 100000})->Args({100, 100000})->Args({200, 100000})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Episode, oful_ball, "oful_ball")->Args({3, 10000})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
