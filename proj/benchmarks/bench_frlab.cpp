#include "frlab/solver1d.hpp"
#include "frlab/vonneumann.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace frlab;

static void BM_AdvectionSymbol(benchmark::State& state)
{
    const int p = static_cast<int>(state.range(0));
    const SchemeConfig cfg = scheme_for_order(p);
    const AdvectionOps ops = assemble_advection(cfg, nodal_dg(p));
    const double k = cfg.k_from_hat(0.4 * std::numbers::pi);
    for (auto _ : state)
        benchmark::DoNotOptimize(advection_symbol(ops, cfg, k));
}
BENCHMARK(BM_AdvectionSymbol)->DenseRange(2, 8, 2);

static void BM_PhysicalOperatorAdvDiff(benchmark::State& state)
{
    SchemeConfig cfg = scheme_for_order(4);
    cfg.nu = 0.1;
    const CorrectionPair cp = nodal_dg(4);
    const double k = cfg.k_from_hat(0.4 * std::numbers::pi);
    for (auto _ : state)
        benchmark::DoNotOptimize(physical_operator(cfg, cp, k));
}
BENCHMARK(BM_PhysicalOperatorAdvDiff);

static void BM_CflLimit(benchmark::State& state)
{
    const SchemeConfig cfg = scheme_for_order(4);
    const CorrectionPair cp = glsfr_from_params({4, {0.3, 0.2}});
    const int samples = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(cfl_limit(cfg, cp, StabilityOrder::rk4, samples));
}
BENCHMARK(BM_CflLimit)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_DispersionSweep(benchmark::State& state)
{
    const SchemeConfig cfg = scheme_for_order(4);
    const CorrectionPair cp = nodal_dg(4);
    SweepOptions opts;
    opts.n_k = 256;
    for (auto _ : state)
        benchmark::DoNotOptimize(dispersion_sweep(cfg, cp, opts));
}
BENCHMARK(BM_DispersionSweep)->Unit(benchmark::kMillisecond);

static void BM_RhsAdvDiff(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    SchemeConfig cfg = scheme_for_order(4);
    cfg.nu = 0.01;
    const Solver1D solver(Mesh1D{n, 0.0, 1.0}, cfg, nodal_dg(4));
    const SolverState s = solver.project([](double x) { return std::sin(2.0 * std::numbers::pi * x); });
    for (auto _ : state)
        benchmark::DoNotOptimize(solver.rhs_advdiff(s.u));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RhsAdvDiff)->RangeMultiplier(4)->Range(16, 1024);

static void BM_Rk44Step(benchmark::State& state)
{
    const SchemeConfig cfg = scheme_for_order(4);
    const Solver1D solver(Mesh1D{128, 0.0, 1.0}, cfg, nodal_dg(4));
    SolverState s = solver.project([](double x) { return std::sin(2.0 * std::numbers::pi * x); });
    for (auto _ : state)
        solver.rk44_step(s, 1e-4);
    benchmark::DoNotOptimize(s.u.sum());
}
BENCHMARK(BM_Rk44Step);
BENCHMARK_MAIN();
