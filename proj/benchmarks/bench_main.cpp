#include <benchmark/benchmark.h>

#include "twistlaw/continued_fraction.hpp"
#include "twistlaw/excursion.hpp"
#include "twistlaw/origami.hpp"

using namespace twistlaw;

static void BM_GaussSteps(benchmark::State& state) {
    Rng rng = make_rng(1, Stream::cf_samples, 0);
    const auto x = cf::PrecisionReal::uniform(rng, 200000);
    for (auto _ : state) {
        auto e = cf::cf_expand(x, static_cast<std::size_t>(state.range(0)));
        benchmark::DoNotOptimize(e.coeffs.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GaussSteps)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_EnumerateExcursions(benchmark::State& state) {
    const exc::PreparedSurface surface(
        state.range(0) ? flat::parse_origami("3; (1 2); (1 3)") : flat::Origami::torus());
    Rng rng = make_rng(1, Stream::rays, 0);
    exc::TrajectoryConfig tc;
    tc.T = 500;
    tc.eps = surface.eps_zero / 2;
    tc.theta = exc::sample_direction(rng, exc::direction_bits(tc.T));
    for (auto _ : state) {
        auto t = exc::enumerate_excursions(surface, tc);
        benchmark::DoNotOptimize(t.records.data());
    }
}
BENCHMARK(BM_EnumerateExcursions)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_CylinderDecomposition(benchmark::State& state) {
    // A 6-square staircase in a direction with a long continued fraction.
    const auto o = flat::parse_origami("6; (1 2)(3 4)(5 6); (2 3)(4 5)");
    const mpz_class p("832040"), q("1346269"); // consecutive Fibonacci numbers
    for (auto _ : state) {
        auto c = flat::cylinder_decomposition(o, p, q);
        benchmark::DoNotOptimize(c.data());
    }
}
BENCHMARK(BM_CylinderDecomposition)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
