// Serial reference vs OpenMP for the parallel kernels.

#include <benchmark/benchmark.h>

#include "mousedyn/experiment.hpp"
#include "mousedyn/features.hpp"
#include "mousedyn/forest.hpp"
#include "mousedyn/knn.hpp"
#include "support/samples.hpp"
#include "support/synthetic.hpp"

using namespace mousedyn;
using namespace mousedyn::testing;

namespace {

struct KnnData {
  std::vector<LabeledSample> train;
  std::vector<std::vector<double>> queries;
};

const KnnData& knn_data() {
  static const KnnData data = [] {
    Rng rng(1);
    KnnData d;
    d.train = random_samples(4000, 39, rng);
    for (auto& s : random_samples(2000, 39, rng)) d.queries.push_back(std::move(s.features));
    return d;
  }();
  return data;
}

const std::vector<LabeledSample>& forest_data() {
  static const auto data = [] {
    Rng rng(2);
    return random_samples(2000, 39, rng);
  }();
  return data;
}

const Dataset& dataset() {
  static const Dataset ds = synthetic_dataset(
      {{"1", fast_straight(), 6, 200}, {"2", slow_curvy(), 6, 200}, {"3", {900, 0.1, 2, 0.8}, 6, 200}}, 3);
  return ds;
}

const FeatureTable& table() {
  static const FeatureTable t = extract_all(dataset(), {}, {});
  return t;
}

void BM_KnnSerial(benchmark::State& st) {
  const KnnModel m(knn_data().train, 5);
  for (auto _ : st) benchmark::DoNotOptimize(serial::knn_score_batch(m, knn_data().queries));
}

void BM_KnnParallel(benchmark::State& st) {
  const KnnModel m(knn_data().train, 5);
  for (auto _ : st) benchmark::DoNotOptimize(knn_score_batch(m, knn_data().queries));
}

void BM_ForestSerial(benchmark::State& st) {
  ForestConfig cfg;
  cfg.n_trees = 64;
  for (auto _ : st) benchmark::DoNotOptimize(serial::forest_fit(forest_data(), cfg, 7));
}

void BM_ForestParallel(benchmark::State& st) {
  ForestConfig cfg;
  cfg.n_trees = 64;
  for (auto _ : st) benchmark::DoNotOptimize(forest_fit(forest_data(), cfg, 7));
}

void BM_ExtractSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial::extract_all(dataset(), {}, {}));
}

void BM_ExtractParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(extract_all(dataset(), {}, {}));
}

void BM_ScenarioASerial(benchmark::State& st) {
  ExperimentConfig cfg;
  cfg.model = ModelKind::RandomForest;
  cfg.model_cfg.n_trees = 30;
  for (auto _ : st) benchmark::DoNotOptimize(serial::run_scenario_a(table(), cfg));
}

void BM_ScenarioAParallel(benchmark::State& st) {
  ExperimentConfig cfg;
  cfg.model = ModelKind::RandomForest;
  cfg.model_cfg.n_trees = 30;
  for (auto _ : st) benchmark::DoNotOptimize(run_scenario_a(table(), cfg));
}

}  // namespace

BENCHMARK(BM_KnnSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ForestSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExtractSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScenarioASerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScenarioAParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
