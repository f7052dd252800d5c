#include <benchmark/benchmark.h>

#include "qtm/collision.hpp"
#include "qtm/lindblad.hpp"
#include "qtm/sweep.hpp"
#include "qtm/thermo.hpp"

namespace {

qtm::MachineParams coherent_params() {
    qtm::MachineParams p = qtm::figure_preset("fig2a").base;
    p.lambda = {0.4, 0.0, 0.0};
    return p;
}

void BM_SolveNess(benchmark::State& state) {
    const qtm::MachineParams p = coherent_params();
    for (auto _ : state) benchmark::DoNotOptimize(qtm::solve_ness(p));
}
BENCHMARK(BM_SolveNess);

void BM_SteadyCurrents(benchmark::State& state) {
    const qtm::MachineParams p = coherent_params();
    for (auto _ : state) benchmark::DoNotOptimize(qtm::steady_currents(p));
}
BENCHMARK(BM_SteadyCurrents);

void BM_Collide(benchmark::State& state) {
    const qtm::CollisionModel model(coherent_params());
    const qtm::CMatrix rho = qtm::CMatrix::Identity(3, 3) / 3.0;
    for (auto _ : state) benchmark::DoNotOptimize(model.collide(rho));
}
BENCHMARK(BM_Collide);

void BM_DiagramRow(benchmark::State& state) {
    qtm::SweepSpec spec =
        qtm::diagram_spec(qtm::figure_preset("fig2a"), static_cast<std::size_t>(state.range(0)), 2);
    spec.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(qtm::regime_diagram(spec));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_DiagramRow)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
