#include <hodgeloop/complex.hpp>
#include <hodgeloop/hodge.hpp>
#include <hodgeloop/ica.hpp>
#include <hodgeloop/loops.hpp>
#include <hodgeloop/nullspace.hpp>
#include <hodgeloop/synthetic.hpp>

#include <benchmark/benchmark.h>

using namespace hodgeloop;

namespace {

void BM_cknn_clique(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto synth = synth_manifold(ManifoldName::torus, n, 0.02, 0);
    for (auto _ : state) {
        auto g = cknn_graph(synth.cloud, 20, 1.0);
        auto cx = clique_complex(g);
        benchmark::DoNotOptimize(cx.n2());
    }
}
BENCHMARK(BM_cknn_clique)->Arg(256)->Arg(400)->Arg(676);

void BM_boundary_assemble(benchmark::State& state) {
    auto grid = flat_torus_grid(static_cast<int>(state.range(0)));
    Vec w2 = Vec::Ones(grid.complex.n2());
    for (auto _ : state) {
        auto sys = assemble(grid.complex, w2);
        benchmark::DoNotOptimize(sys.L.nonZeros());
    }
}
BENCHMARK(BM_boundary_assemble)->Arg(16)->Arg(32)->Arg(64);

void BM_laplacian_matvec(benchmark::State& state) {
    auto grid = flat_torus_grid(static_cast<int>(state.range(0)));
    auto sys = assemble(grid.complex, Vec::Ones(grid.complex.n2()));
    Vec x = Vec::Ones(sys.dim()).normalized();
    for (auto _ : state) {
        Vec y = sys.L * x;
        benchmark::DoNotOptimize(y.sum());
    }
}
BENCHMARK(BM_laplacian_matvec)->Arg(32)->Arg(64)->Arg(128);

void BM_harmonic_basis(benchmark::State& state) {
    auto grid = flat_torus_grid(static_cast<int>(state.range(0)));
    auto sys = assemble(grid.complex, Vec::Ones(grid.complex.n2()));
    for (auto _ : state) {
        NullspaceOptions opts;
        auto basis = harmonic_basis(sys.L, opts);
        benchmark::DoNotOptimize(basis.beta);
    }
}
BENCHMARK(BM_harmonic_basis)->Unit(benchmark::kMillisecond)->Arg(12)->Arg(16)->Arg(24);

void BM_ica(benchmark::State& state) {
    auto grid = flat_torus_grid(static_cast<int>(state.range(0)));
    auto sys = assemble(grid.complex, Vec::Ones(grid.complex.n2()));
    auto basis = harmonic_basis(sys.L);
    for (auto _ : state) {
        auto res = ica_no_prewhite(basis.Y);
        benchmark::DoNotOptimize(res.iterations);
    }
}
BENCHMARK(BM_ica)->Unit(benchmark::kMillisecond)->Arg(12)->Arg(20);

void BM_loops(benchmark::State& state) {
    auto grid = flat_torus_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto loops = shortest_homologous_loops(grid.harmonics, grid.complex.n0,
                                               grid.complex.edges, grid.d);
        benchmark::DoNotOptimize(loops.size());
    }
}
BENCHMARK(BM_loops)->Unit(benchmark::kMillisecond)->Arg(12)->Arg(20)->Arg(28);

}  // namespace
