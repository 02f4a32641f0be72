// Serial reference vs OpenMP kernels at the scale of the 512x512 image
// experiment (4096 blocks of dimension 192).

#include "rescale/ingest.hpp"
#include "rescale/kernels.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace rescale;

constexpr Eigen::Index kPoints = 4096;
constexpr Eigen::Index kDim = 192;

const PointMatrix& points() {
    static const PointMatrix p = [] {
        const CounterRng rng(1);
        PointMatrix m(kPoints, kDim);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(static_cast<std::uint64_t>(i));
        return m;
    }();
    return p;
}

const Matrix& weights() {
    static const Matrix w = [] {
        const CounterRng rng(2);
        Matrix m(kDim, kDim);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal(static_cast<std::uint64_t>(i));
        return m;
    }();
    return w;
}

const Vector& shift() {
    static const Vector s = Vector::Constant(kDim, 0.5);
    return s;
}

template <auto Fn>
void moments(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(Fn(points()));
}

template <auto Fn>
void transform(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(Fn(points(), shift(), weights()));
}

BENCHMARK(moments<kernels::serial::moments>)->Name("moments/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(moments<kernels::omp::moments>)->Name("moments/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(transform<kernels::serial::squared_norms>)->Name("squared_norms/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(transform<kernels::omp::squared_norms>)->Name("squared_norms/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(transform<kernels::serial::affine>)->Name("affine/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(transform<kernels::omp::affine>)->Name("affine/omp")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
