#include <benchmark/benchmark.h>

#include "rodest/scenario.hpp"

using namespace rodest;

namespace {

Scenario balanced(int nodes) { return balanced_release_scenario(nodes); }

void BM_StaticSolve(benchmark::State& state) {
  Scenario sc = balanced(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    RodState s = solve_static(sc.rod, sc.solver, sc.base_pose,
                              sc.hold_tip_wrench, {});
    benchmark::DoNotOptimize(s.pose.back().p);
  }
}
BENCHMARK(BM_StaticSolve)->Arg(30)->Arg(60);

void BM_SpatialSweep(benchmark::State& state) {
  Scenario sc = balanced(static_cast<int>(state.range(0)));
  SpatialModel model(sc.rod, {});
  DerivativeRule rule;
  Wrench lam0 = stack(Vec3::Zero(), Vec3(-500.0, 0, 0));
  for (auto _ : state) {
    RodState s = integrate_spatial(model, rule, sc.base_pose, Twist::Zero(),
                                   lam0);
    benchmark::DoNotOptimize(s.wrench.back());
  }
}
BENCHMARK(BM_SpatialSweep)->Arg(30)->Arg(60)->Arg(120);

void BM_DynamicStep(benchmark::State& state) {
  Scenario sc = balanced(static_cast<int>(state.range(0)));
  RodState init = solve_static(sc.rod, sc.solver, sc.base_pose,
                               sc.hold_tip_wrench, {});
  ShootingStepper stepper(sc.rod, sc.solver,
                          BoundaryInputs::fixed_base_free_tip());
  stepper.reset(init);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stepper.step().pose.back().p);
  }
}
BENCHMARK(BM_DynamicStep)->Arg(30)->Arg(45)->Arg(60);

void BM_ObserverStep(benchmark::State& state) {
  Scenario sc = balanced(30);
  sc.duration = sc.solver.dt * static_cast<double>(state.range(0));
  GroundTruth truth = synthesize_ground_truth(sc);
  for (auto _ : state) {
    ObserverRunResult run;
    run_scenario(sc, ObserverVariant::Combined, 1.0, truth, {}, &run);
    benchmark::DoNotOptimize(run.estimates.back().pose.back().p);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ObserverStep)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_OptimalGains(benchmark::State& state) {
  Scenario sc = balanced(10);
  for (auto _ : state) {
    auto [g0, g1] = optimal_gains(sc.rod.inertia[0], sc.rod.stiffness[0]);
    benchmark::DoNotOptimize(g0);
    benchmark::DoNotOptimize(g1);
  }
}
BENCHMARK(BM_OptimalGains);

}  // namespace

BENCHMARK_MAIN();
