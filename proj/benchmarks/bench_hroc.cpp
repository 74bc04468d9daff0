#include "hroc/convexify1d.hpp"
#include "hroc/hroc.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

using namespace hroc;

const Matrix kFhat{{0.2, 0.1}, {0.1, 0.3}};

void BM_Convexify(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> x(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        w[i] = std::cos(25.0 * x[i]) + x[i] * x[i];
    }
    ConvexHull1D hull;
    for (auto _ : state) {
        convexify_into(SampledLine{x, w}, hull);
        benchmark::DoNotOptimize(hull.y.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Convexify)->RangeMultiplier(4)->Range(1 << 8, 1 << 18)->Complexity(benchmark::oN);

void BM_KernelKsd(benchmark::State& state) {
    const KohnStrangEnergy W;
    HrocEngine engine(make_params(2, static_cast<int>(state.range(0)), 1.0), HrocOptions{false});
    const TreeNode root(kFhat);
    for (auto _ : state) benchmark::DoNotOptimize(engine.kernel(root, root, 1.0, W));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelKsd)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oN);

void BM_HrocKsd(benchmark::State& state) {
    const KohnStrangEnergy W;
    HrocEngine engine(make_params(2, static_cast<int>(state.range(0)), 1.0), HrocOptions{false});
    for (auto _ : state) benchmark::DoNotOptimize(engine.run(W, kFhat).W_rc);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HrocKsd)->Arg(500)->Arg(1000)->Arg(3000)->Arg(5000)->Arg(10000)->Arg(50000)->Complexity(benchmark::oN)
    ->Unit(benchmark::kMillisecond);

void BM_HrocMultiwell3(benchmark::State& state) {
    const MultiwellEnergy W;
    HrocEngine engine(make_params(3, static_cast<int>(state.range(0)), 1.0), HrocOptions{false});
    for (auto _ : state) benchmark::DoNotOptimize(engine.run(W, Matrix(3)).W_rc);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HrocMultiwell3)->Arg(300)->Arg(1000)->Arg(5000)->Complexity(benchmark::oN)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
