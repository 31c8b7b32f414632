#include <benchmark/benchmark.h>

#include <random>

#include "lseries/engines.hpp"
#include "lseries/geometry.hpp"
#include "lseries/nets.hpp"
#include "lseries/oracle.hpp"

using namespace lseries;

static SparseAssignment dense_assignment(std::size_t len) {
    SparseAssignment a;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> bit(0, 1);
    for (std::size_t n = 0; n < len; ++n) a.append(n, cplx{static_cast<double>(bit(rng)), 0.0});
    return a;
}

static void BM_EvalPrefixDense(benchmark::State& state) {
    auto a = dense_assignment(static_cast<std::size_t>(state.range(0)));
    cplx z{0.7, 0.2};
    for (auto _ : state) benchmark::DoNotOptimize(eval_prefix(a, z));
}
BENCHMARK(BM_EvalPrefixDense)->Range(64, 65536);

static void BM_EvalPrefixSparse(benchmark::State& state) {
    SparseAssignment a;
    for (int i = 0; i < state.range(0); ++i)
        a.append(static_cast<std::uint64_t>(i) * 977 + 3, cplx{1.0, 0.0});
    cplx z{0.99, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(eval_prefix(a, z));
}
BENCHMARK(BM_EvalPrefixSparse)->Range(16, 4096);

static void BM_UnimodularSumApprox(benchmark::State& state) {
    auto zeta = UnitAngle::floating(std::sqrt(2.0) / 10.0);
    double eps = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(nets::unimodular_sum_approx({3.0, 3.0}, zeta, 0, eps, 1u << 20));
}
BENCHMARK(BM_UnimodularSumApprox)->Arg(10)->Arg(100)->Arg(1000);

static void BM_LatticeExpand(benchmark::State& state) {
    for (auto _ : state) {
        auto p = nets::lattice_round({57.3, -41.2}, nets::LatticeRoot::Omega);
        benchmark::DoNotOptimize(nets::expand_nonneg(p, 5));
    }
}
BENCHMARK(BM_LatticeExpand);

static void BM_BoundedTailSchedule(benchmark::State& state) {
    CoefficientSet lambda({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    double R = geometry::descent_radius(lambda);
    std::vector<std::uint64_t> idx(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    cplx z{0.995, 0.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(geometry::bounded_tail_schedule_with_radius(lambda, z, idx, R));
}
BENCHMARK(BM_BoundedTailSchedule)->Range(256, 65536);

static void BM_OracleMeetInMiddle(benchmark::State& state) {
    CoefficientSet lambda({{0, 0}, {1, 0}});
    cplx tau{0.6, 0.21};
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::best_prefix_error_mim(
            lambda, tau, {0.7, 0.3}, static_cast<std::uint32_t>(state.range(0))));
}
BENCHMARK(BM_OracleMeetInMiddle)->Arg(16)->Arg(20)->Arg(24);

BENCHMARK_MAIN();
