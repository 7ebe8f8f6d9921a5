#include <benchmark/benchmark.h>

#include <cmath>

#include "riccilab/flows.hpp"
#include "riccilab/reference.hpp"
#include "riccilab/scenario.hpp"

using namespace riccilab;

namespace {

MetricField test_metric(int n) {
    const Grid2D g = torus_grid(n, n);
    std::vector<double> u(g.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) u[g.index(i, j)] = 0.1 * std::sin(g.x(i)) * std::cos(2 * g.y(j));
    return as_general(conformal_metric(g, std::move(u)));
}

OneFormField test_form(const Grid2D& g) {
    OneFormField phi(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            phi.x[g.index(i, j)] = std::sin(g.x(i)) * std::cos(g.y(j));
            phi.y[g.index(i, j)] = std::cos(g.x(i)) + 0.5 * std::sin(g.y(j));
        }
    return phi;
}

void BM_curvature_reference(benchmark::State& st) {
    const MetricField g = test_metric(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(reference::curvature(g));
}

void BM_curvature_serial(benchmark::State& st) {
    const MetricField g = test_metric(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(curvature(g, Exec::serial));
}

void BM_curvature_parallel(benchmark::State& st) {
    const MetricField g = test_metric(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(curvature(g, Exec::parallel));
}

template <HodgeMethod M>
void BM_hodge_reference(benchmark::State& st) {
    const MetricField g = test_metric(static_cast<int>(st.range(0)));
    const OneFormField phi = test_form(g.grid);
    for (auto _ : st) benchmark::DoNotOptimize(reference::hodge_laplacian(phi, g, M));
}

template <HodgeMethod M, Exec E>
void BM_hodge(benchmark::State& st) {
    const MetricField g = test_metric(static_cast<int>(st.range(0)));
    const OneFormField phi = test_form(g.grid);
    for (auto _ : st) benchmark::DoNotOptimize(hodge_laplacian(phi, g, M, E));
}

template <Exec E>
void BM_coupled_step(benchmark::State& st) {
    ScenarioSpec s;
    s.family = Family::conformal_torus;
    s.metric = MetricPreset::sine;
    s.nx = s.ny = static_cast<int>(st.range(0));
    s.forms = {"sinx", "class"};
    s.gauge_form = "class";
    s.subsolution = SubsolutionPreset::one_plus_cos;
    const ScenarioSetup setup = build_initial_state(s);
    const FlowState state = prepare_state(setup.state, setup.integrator);
    const double dt = cfl_dt(state, setup.integrator);
    for (auto _ : st) benchmark::DoNotOptimize(advance(state, dt, setup.integrator, E));
}

}  // namespace

BENCHMARK(BM_curvature_reference)->Arg(64)->Arg(256);
BENCHMARK(BM_curvature_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_curvature_parallel)->Arg(64)->Arg(256);
BENCHMARK(BM_hodge_reference<HodgeMethod::via_d_delta>)->Arg(64)->Arg(256);
BENCHMARK(BM_hodge<HodgeMethod::via_d_delta, Exec::serial>)->Arg(64)->Arg(256);
BENCHMARK(BM_hodge<HodgeMethod::via_d_delta, Exec::parallel>)->Arg(64)->Arg(256);
BENCHMARK(BM_hodge_reference<HodgeMethod::via_bochner>)->Arg(64)->Arg(256);
BENCHMARK(BM_hodge<HodgeMethod::via_bochner, Exec::serial>)->Arg(64)->Arg(256);
BENCHMARK(BM_hodge<HodgeMethod::via_bochner, Exec::parallel>)->Arg(64)->Arg(256);
BENCHMARK(BM_coupled_step<Exec::serial>)->Arg(128);
BENCHMARK(BM_coupled_step<Exec::parallel>)->Arg(128);

int main(int argc, char** argv) {
    configure_allocator();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
