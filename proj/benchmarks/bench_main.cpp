#include <benchmark/benchmark.h>

#include <complex>

#include "ectdim/contour.hpp"
#include "ectdim/dimensions.hpp"
#include "ectdim/estimate.hpp"
#include "ectdim/fgrid.hpp"
#include "ectdim/forward.hpp"

using namespace ectdim;

namespace {

forward::ProbeGeometry bench_probe() {
    forward::ProbeGeometry probe;
    probe.r1 = 23.60e-3;
    probe.r2 = 23.95e-3;
    probe.h1 = 6.0e-3;
    probe.h2 = 6.0e-3;
    probe.d = 2.20e-3;
    probe.l0 = 1.0e-3;
    probe.n1 = 17;
    probe.n2 = 17;
    return probe;
}

const forward::FGrid& bench_grid() {
    static forward::FGrid grid = [] {
        forward::GridBuildParams params;
        params.n2 = 96;
        params.n3 = 96;
        return forward::compute_f_grid(bench_probe(), params);
    }();
    return grid;
}

void BM_MutualImpedance(benchmark::State& state) {
    const auto probe = bench_probe();
    const forward::PlateSpec plate{18.0e6, 2.0e-3};
    const double omega = 2.0 * 3.14159265358979323846 * 1650.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward::mutual_impedance_delta(probe, plate, omega));
    }
}
BENCHMARK(BM_MutualImpedance);

void BM_GridBuild(benchmark::State& state) {
    const auto probe = bench_probe();
    forward::GridBuildParams params;
    params.n2 = static_cast<std::size_t>(state.range(0));
    params.n3 = params.n2;
    params.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward::compute_f_grid(probe, params));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(params.n2 * params.n3));
}
BENCHMARK(BM_GridBuild)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_LevelCurve(benchmark::State& state) {
    const auto& grid = bench_grid();
    const double level = std::abs(grid.at(grid.n2() / 2, grid.n3() / 2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            inversion::extract_level_curve(grid, inversion::Functional::magnitude, level));
    }
}
BENCHMARK(BM_LevelCurve);

void BM_EstimateSingleFrequency(benchmark::State& state) {
    const auto probe = bench_probe();
    const auto& grid = bench_grid();
    const forward::PlateSpec plate{18.0e6, 2.0e-3};
    const double omega = 2.0 * 3.14159265358979323846 * 1650.0;
    const auto dz = forward::mutual_impedance_delta(probe, plate, omega);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            inversion::estimate_single_frequency(dz, omega, probe, grid));
    }
}
BENCHMARK(BM_EstimateSingleFrequency)->Unit(benchmark::kMillisecond);

void BM_DerivePiGroups(benchmark::State& state) {
    using dims::Rational;
    dims::DimensionalSystem sys;
    sys.basis = {"L", "T", "Ohm"};
    auto quantity = [&sys](const char* name, int l, int t, int ohm) {
        dims::QuantitySpec q;
        q.name = name;
        q.dimension.exponents = {Rational(l), Rational(t), Rational(ohm)};
        sys.quantities.push_back(std::move(q));
    };
    quantity("dZm", 0, 0, 1);
    quantity("sigma", -1, 0, -1);
    quantity("nu0", 1, -1, -1);
    quantity("omega", 0, -1, 0);
    quantity("dh", 1, 0, 0);
    quantity("l0", 1, 0, 0);
    quantity("D", 1, 0, 0);
    quantity("t", 0, 0, 0);
    quantity("theta", 0, 0, 0);
    sys.repeating = {"nu0", "omega", "D"};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dims::derive_pi_groups(sys));
    }
}
BENCHMARK(BM_DerivePiGroups);

}  // namespace

BENCHMARK_MAIN();
