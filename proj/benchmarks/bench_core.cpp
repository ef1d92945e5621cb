#include <benchmark/benchmark.h>

#include "patchroute/coverage.hpp"
#include "patchroute/gainmap.hpp"
#include "patchroute/router.hpp"
#include "patchroute/synthetic.hpp"

using namespace patchroute;

namespace {

std::vector<BBox> bench_boxes(int count, std::uint64_t seed) {
    DetRng rng(seed);
    std::vector<BBox> boxes;
    boxes.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double x = rng.uniform(0.0, 8000.0);
        const double y = rng.uniform(0.0, 8000.0);
        const double w = rng.uniform(8.0, 192.0);
        const double h = rng.uniform(8.0, 192.0);
        boxes.push_back({x, y, std::min(x + w, 8192.0), std::min(y + h, 8192.0), 0, i});
    }
    return boxes;
}

const GridSpec kGrid{128, 128, {8192, 8192}};
const PatchSpec kPatch{512, 512};
const BinConfig kBins{6};

void GainMapNaive(benchmark::State& state) {
    const auto boxes = bench_boxes(static_cast<int>(state.range(0)), 99);
    for (auto _ : state) {
        auto map = build_gt_gainmap(boxes, kGrid, kPatch, kBins);
        benchmark::DoNotOptimize(map.values.data());
    }
}
BENCHMARK(GainMapNaive)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

void GainMapFast(benchmark::State& state) {
    const auto boxes = bench_boxes(static_cast<int>(state.range(0)), 99);
    for (auto _ : state) {
        auto map = build_gt_gainmap_fast(boxes, kGrid, kPatch, kBins);
        benchmark::DoNotOptimize(map.values.data());
    }
}
BENCHMARK(GainMapFast)->Arg(50)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void SoftSubtractSelect(benchmark::State& state) {
    const auto boxes = bench_boxes(500, 99);
    const GainMap map = build_gt_gainmap_fast(boxes, kGrid, kPatch, kBins);
    const RouterConfig config{static_cast<int>(state.range(0)), kPatch, Strategy::SoftLinear};
    for (auto _ : state) {
        auto sel = soft_subtract_select(map, config);
        benchmark::DoNotOptimize(sel.entries.data());
    }
}
BENCHMARK(SoftSubtractSelect)->Arg(10)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

void ExactGreedySelect(benchmark::State& state) {
    const auto boxes = bench_boxes(500, 99);
    const CoverageCriterion half{0.5};
    for (auto _ : state) {
        auto sel = exact_greedy_select(boxes, kGrid, kPatch,
                                       static_cast<int>(state.range(0)), half);
        benchmark::DoNotOptimize(sel.entries.data());
    }
}
BENCHMARK(ExactGreedySelect)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
