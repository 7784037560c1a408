#include <random>

#include <benchmark/benchmark.h>

#include "soilanom/dbscan.hpp"
#include "soilanom/geodata.hpp"
#include "soilanom/iforest.hpp"
#include "soilanom/pca.hpp"

namespace {

using namespace soilanom;

FeatureMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    FeatureMatrix m;
    for (std::size_t j = 0; j < d; ++j) m.columns.push_back("c" + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) {
        m.row_ids.push_back("r" + std::to_string(i));
        for (std::size_t j = 0; j < d; ++j) m.values.push_back(gauss(rng));
    }
    m.standardized = true;
    m.col_means.assign(d, 0.0);
    m.col_stds.assign(d, 1.0);
    return m;
}

void BM_IForestFitScore(benchmark::State& state) {
    auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 8, 7);
    ForestConfig cfg;
    for (auto _ : state) {
        auto f = fit_forest(m, cfg);
        benchmark::DoNotOptimize(score_samples(f, m));
    }
}
BENCHMARK(BM_IForestFitScore)->Arg(78)->Arg(500);

void BM_Dbscan(benchmark::State& state) {
    auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 8, 7);
    DbscanConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(cluster(m, cfg));
}
BENCHMARK(BM_Dbscan)->Arg(78)->Arg(500);

void BM_KDistance(benchmark::State& state) {
    auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 8, 7);
    for (auto _ : state) benchmark::DoNotOptimize(k_distance_profile(m, 5));
}
BENCHMARK(BM_KDistance)->Arg(78)->Arg(500);

void BM_PcaFitScore(benchmark::State& state) {
    auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 8, 7);
    for (auto _ : state) {
        auto model = fit_pca(m, 2);
        benchmark::DoNotOptimize(reconstruction_errors(model, m));
    }
}
BENCHMARK(BM_PcaFitScore)->Arg(78)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
