#include <benchmark/benchmark.h>

#include <random>

#include "swapsteer/randomness.hpp"
#include "swapsteer/selftest.hpp"
#include "swapsteer/witness.hpp"

namespace {

using namespace swapsteer;

void BM_correlations(benchmark::State& state) {
    const Strategy s = isotropic_strategy(0.8);
    for (auto _ : state) benchmark::DoNotOptimize(correlations(s));
}
BENCHMARK(BM_correlations);

void BM_witness_expectation_form(benchmark::State& state) {
    const Strategy s = isotropic_strategy(0.8);
    for (auto _ : state) benchmark::DoNotOptimize(witness_expectation_form(s));
}
BENCHMARK(BM_witness_expectation_form);

void BM_fourier_round_trip(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    CorrelationTable t;
    double sum = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) sum += t.p(a, b) = unif(rng);
    t.p /= sum;
    for (auto _ : state)
        benchmark::DoNotOptimize(probabilities_from_expectations(expectation_values(t)));
}
BENCHMARK(BM_fourier_round_trip);

void BM_schmidt_decompose(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(16);
    for (Eigen::Index i = 0; i < 16; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    v.normalize();
    const SubsystemShape shape{{4, 4}, {"L", "R"}};
    for (auto _ : state) benchmark::DoNotOptimize(schmidt_decompose(v, shape, {"L"}));
}
BENCHMARK(BM_schmidt_decompose);

void BM_lhs_single_restart(benchmark::State& state) {
    LhsConfig config;
    config.restarts = 1;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(lhs_bound(config, seed++));
}
BENCHMARK(BM_lhs_single_restart);

void BM_verify_selftest(benchmark::State& state) {
    const Strategy s = ideal_strategy();
    for (auto _ : state) benchmark::DoNotOptimize(verify_selftest(s));
}
BENCHMARK(BM_verify_selftest);

void BM_optimize_eve(benchmark::State& state) {
    CorrelationTable ideal;
    ideal.p = Eigen::Matrix4d::Identity() / 4.0;
    EveConfig config;
    config.restarts = 1;
    config.iterations = 5;
    for (auto _ : state) benchmark::DoNotOptimize(optimize_eve(ideal, config, 1));
}
BENCHMARK(BM_optimize_eve);

}  // namespace

BENCHMARK_MAIN();
