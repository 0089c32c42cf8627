// Microbenchmarks for the core pipeline stages: polynomial root finding,
// the parameter-pair eliminator (plane-curve node census), diagram
// construction, and the self-linking integral.
#include <benchmark/benchmark.h>

#include <random>
#include <stdexcept>

#include "rlink/curve.hpp"
#include "rlink/invariants.hpp"
#include "rlink/linking.hpp"
#include "rlink/poly.hpp"
#include "rlink/projection.hpp"

using namespace rlink;

namespace {

Poly random_poly(int degree, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cdouble> c(static_cast<size_t>(degree) + 1);
    for (auto& x : c) x = cdouble(gauss(rng), 0.0);
    return Poly(std::move(c));
}

ParamSpaceCurve twisted_cubic() {
    std::vector<BinaryForm> rows;
    rows.emplace_back(std::vector<double>{1, 0, 0, 0});
    rows.emplace_back(std::vector<double>{0, 1, 0, 0});
    rows.emplace_back(std::vector<double>{0, 0, 1, 0});
    rows.emplace_back(std::vector<double>{0, 0, 0, 1});
    return {RowCurve{std::move(rows), 3}, +1, "tc"};
}

ParamSpaceCurve random_curve(int degree, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ToleranceConfig cfg;
    for (int tries = 0; tries < 64; ++tries) {
        std::vector<BinaryForm> rows;
        for (int i = 0; i < 4; ++i) {
            std::vector<double> c(static_cast<size_t>(degree) + 1);
            for (auto& x : c) x = gauss(rng);
            rows.emplace_back(std::move(c));
        }
        ParamSpaceCurve c{RowCurve{std::move(rows), degree}, +1, "bench"};
        if (validate_smooth_link(c, cfg).pass) return c;
    }
    throw std::runtime_error("no valid random curve found");
}

}  // namespace

static void BM_FindRoots(benchmark::State& state) {
    const int degree = static_cast<int>(state.range(0));
    std::mt19937_64 rng(12345);
    ToleranceConfig cfg;
    Poly p = random_poly(degree, rng);
    for (auto _ : state) benchmark::DoNotOptimize(find_roots(p, cfg));
    state.SetLabel("degree " + std::to_string(degree));
}
BENCHMARK(BM_FindRoots)->Arg(6)->Arg(10)->Arg(16);

static void BM_NodeCensus(benchmark::State& state) {
    const int degree = static_cast<int>(state.range(0));
    std::mt19937_64 rng(777);
    ToleranceConfig cfg;
    ParamSpaceCurve curve = random_curve(degree, rng);
    ProjectionCenter center = random_center(curve, cfg, 0xBE7C4ULL, 0);
    ParamPlaneCurve plane = project(curve, center, cfg);
    const int expected = (degree - 1) * (degree - 2) / 2;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            parameter_pair_collisions(plane.coords, cfg, 0xBE7C4ULL, expected));
    state.SetLabel("degree " + std::to_string(degree));
}
BENCHMARK(BM_NodeCensus)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_BuildDiagram(benchmark::State& state) {
    const int degree = static_cast<int>(state.range(0));
    std::mt19937_64 rng(4242);
    ToleranceConfig cfg;
    ParamSpaceCurve curve =
        degree == 3 ? twisted_cubic() : random_curve(degree, rng);
    ProjectionCenter center = random_center(curve, cfg, 0xBE7CULL, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_diagram(curve, center, cfg));
    state.SetLabel("degree " + std::to_string(degree));
}
BENCHMARK(BM_BuildDiagram)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_SelfLinkingOsc(benchmark::State& state) {
    ToleranceConfig cfg;
    ParamSpaceCurve tc = twisted_cubic();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            self_linking(tc, FramingKind::osculating(), cfg));
}
BENCHMARK(BM_SelfLinkingOsc)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
