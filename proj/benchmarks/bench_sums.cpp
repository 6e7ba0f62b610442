#include <benchmark/benchmark.h>

#include "mhs/bernoulli.hpp"
#include "mhs/sums.hpp"

using namespace mhs;

namespace {

void BM_ConvolutionS51(benchmark::State& state) {
    long p = state.range(0);
    unsigned r = static_cast<unsigned>(state.range(1));
    MhsQuery q = MhsQuery::harmonic(5, 1, Int(p), r, r);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mhs_convolution(q).residue.residue().get_si());
    }
    state.SetLabel("target p^r = " + q.target.get_str());
}
BENCHMARK(BM_ConvolutionS51)
    ->Args({7, 2})
    ->Args({11, 2})
    ->Args({13, 2})
    ->Args({11, 3})
    ->Args({13, 3})
    ->Unit(benchmark::kMillisecond);

void BM_BruteforceS51(benchmark::State& state) {
    long p = state.range(0);
    unsigned r = static_cast<unsigned>(state.range(1));
    MhsQuery q = MhsQuery::harmonic(5, 1, Int(p), r, r);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mhs_bruteforce(q).residue.residue().get_si());
    }
    state.SetLabel(estimate_terms(q).get_str() + " tuples");
}
BENCHMARK(BM_BruteforceS51)
    ->Args({5, 2})
    ->Args({7, 2})
    ->Unit(benchmark::kMillisecond);

void BM_PowerSum(benchmark::State& state) {
    Modulus mod(Int(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            power_sum(3, SumRange::below_p, mod).residue().get_si());
    }
}
BENCHMARK(BM_PowerSum)->Arg(101)->Arg(1009)->Arg(10007);

void BM_DistinctTupleSum(benchmark::State& state) {
    Modulus mod(Int(state.range(0)), 3);
    std::vector<unsigned> alphas{1, 2, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            distinct_tuple_sum(alphas, SumRange::below_2p_excl_p, mod)
                .residue()
                .get_si());
    }
}
BENCHMARK(BM_DistinctTupleSum)->Arg(13)->Arg(101);

void BM_BernoulliTable(benchmark::State& state) {
    unsigned n = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bernoulli_exact_uncached(n).get_den().get_si());
    }
}
BENCHMARK(BM_BernoulliTable)->Arg(50)->Arg(100)->Arg(200);

} // namespace

BENCHMARK_MAIN();
