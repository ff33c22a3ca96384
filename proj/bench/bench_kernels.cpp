// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "fttc/axioms.hpp"
#include "fttc/house.hpp"

using namespace fttc;

namespace {

DichotomousProblem random_dichotomous(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution accept(0.5);
    for (;;) {
        DichotomousProblem d;
        for (std::size_t i = 0; i < n; ++i) d.agents.push_back("i" + std::to_string(i + 1));
        for (std::size_t o = 0; o < m; ++o) d.objects.push_back("o" + std::to_string(o + 1));
        for (std::size_t i = 0; i < n; ++i) {
            ObjectSet acc;
            for (ObjectId o = 0; o < m; ++o) {
                if (accept(rng)) acc.push_back(o);
            }
            d.acceptable.push_back(acc);
        }
        try {
            validate_dichotomous(d);
            return d;
        } catch (const std::exception&) {
        }
    }
}

void BM_rp(benchmark::State& state) {
    const auto d = random_dichotomous(static_cast<std::size_t>(state.range(0)), 4, 1);
    for (auto _ : state) benchmark::DoNotOptimize(run_rp(d));
}

void BM_rp_serial(benchmark::State& state) {
    const auto d = random_dichotomous(static_cast<std::size_t>(state.range(0)), 4, 1);
    for (auto _ : state) benchmark::DoNotOptimize(run_rp_serial(d));
}

void BM_egalitarian(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = random_dichotomous(n, n / 2, 2);
    for (auto _ : state) benchmark::DoNotOptimize(egalitarian_solution(d));
}

void BM_egalitarian_serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = random_dichotomous(n, n / 2, 2);
    for (auto _ : state) benchmark::DoNotOptimize(egalitarian_solution_serial(d));
}

Problem manipulation_instance() { return to_house_problem(random_dichotomous(4, 3, 3)); }

void BM_manipulation(benchmark::State& state) {
    const auto p = manipulation_instance();
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_manipulation(p, Policy::equal(), ManipulationMode::Strong, 0));
    }
}

void BM_manipulation_serial(benchmark::State& state) {
    const auto p = manipulation_instance();
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_manipulation_serial(p, Policy::equal(), ManipulationMode::Strong, 0));
    }
}

}  // namespace

BENCHMARK(BM_rp)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rp_serial)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_egalitarian)->Arg(10)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_egalitarian_serial)->Arg(10)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_manipulation)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_manipulation_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
