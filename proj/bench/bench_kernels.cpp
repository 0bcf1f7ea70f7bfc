// Serial reference vs OpenMP on the sweeps that dominate the runtime.

#include "brstkit/cohomod.hpp"
#include "brstkit/nilreduce.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace brstkit;

namespace {

struct Fixture {
    WComplex complex;
    Window window;
};

const Fixture& sl3_window() {
    static const Fixture f = [] {
        auto g = std::make_shared<LieAlgebra>(construct_sl(3));
        Element h(g->dim(), Rat(0)), e(g->dim(), Rat(0));
        h[*g->index_of("H1")] = 1;
        h[*g->index_of("H2")] = 1;
        e[*g->index_of("E13")] = 1;
        auto d = make_datum(g, grading_from_element(*g, h), e, 2);
        auto pair = construct_admissible_pair(d, {window_complement(d), {}}).pair;
        auto c = build_w_complex(d, pair, 1, Polarization::preset("kw"), ComplexKind::Adjusted);
        auto w = w_window(c, 1, 1, 50000, Exec::Serial);
        return Fixture{std::move(c), std::move(w)};
    }();
    return f;
}

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_apply_all(benchmark::State& state) {
    const auto& f = sl3_window();
    for (auto _ : state) benchmark::DoNotOptimize(apply_all(f.complex.d, f.window.basis, mode(state)));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.window.basis.size()));
}

void BM_square_zero(benchmark::State& state) {
    const auto& f = sl3_window();
    for (auto _ : state) {
        auto once = apply_all(f.complex.d, f.window.basis, mode(state));
        bool zero = true;
        for (const auto& s : once) zero = zero && f.complex.d.apply(s).empty();
        benchmark::DoNotOptimize(zero);
    }
}

void BM_cohomology(benchmark::State& state) {
    const auto& f = sl3_window();
    auto sec = weight_sector(f.complex);
    for (auto _ : state) benchmark::DoNotOptimize(cohomology_dims(f.window, sec, mode(state)));
}

void BM_grow_window(benchmark::State& state) {
    const auto& f = sl3_window();
    for (auto _ : state) benchmark::DoNotOptimize(w_window(f.complex, 1, 1, 50000, mode(state)));
}

}  // namespace

// Argument 0: serial reference, 1: OpenMP.
BENCHMARK(BM_apply_all)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_square_zero)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cohomology)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grow_window)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
