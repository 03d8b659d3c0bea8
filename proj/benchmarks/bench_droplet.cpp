#include <benchmark/benchmark.h>

#include "droplet/evolution.hpp"
#include "droplet/exact_solutions.hpp"
#include "droplet/torsion_solver.hpp"

using namespace droplet;

static void BM_SolveTorsionTriangle(benchmark::State& state) {
    const ClosedCurve curve = make_rounded_triangle({1.0, 0.05, static_cast<std::size_t>(state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(solve_torsion(curve));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveTorsionTriangle)->RangeMultiplier(2)->Range(200, 1600)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_EvolutionStep(benchmark::State& state) {
    const MobilityLaw law = MobilityLaw::from_spec("p2");
    StepperConfig cfg;
    cfg.marker_count = static_cast<std::size_t>(state.range(0));
    cfg.dt_max = 2e-4;
    const EvolutionState s0 = make_state(make_rounded_triangle({1.0, 0.05, cfg.marker_count}), law, cfg.solver);
    for (auto _ : state) benchmark::DoNotOptimize(step(s0, law, cfg));
}
BENCHMARK(BM_EvolutionStep)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_PairSearch(benchmark::State& state) {
    const EdgeVelocityProfile profile(TriangleOracle(1.0), MobilityLaw::from_spec("p2"));
    PairSearchOptions options;
    options.grid_points = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(find_nonconvex_pair(profile, options));
}
BENCHMARK(BM_PairSearch)->Arg(101)->Arg(401);
BENCHMARK_MAIN();
