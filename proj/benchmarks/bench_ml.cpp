#include <benchmark/benchmark.h>

#include "citescan/ml/sweep.hpp"
#include "citescan/synth.hpp"

namespace {

using namespace citescan;

void BM_TrainEvalSvm(benchmark::State& state) {
    ml::FeatureMatrix matrix = planted_signal_matrix(200, 11);
    ml::SweepPlan plan;
    plan.m = 11;
    plan.k_folds = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            ml::train_eval(0x7ff, ml::Algorithm::SVM, matrix, plan));
    }
}
BENCHMARK(BM_TrainEvalSvm);

void BM_TrainEvalForest(benchmark::State& state) {
    ml::FeatureMatrix matrix = planted_signal_matrix(200, 11);
    ml::SweepPlan plan;
    plan.m = 11;
    plan.k_folds = 10;
    plan.n_trees = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            ml::train_eval(0x7ff, ml::Algorithm::RANDOM_FOREST, matrix, plan));
    }
}
BENCHMARK(BM_TrainEvalForest)->Arg(25)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
