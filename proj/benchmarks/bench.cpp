#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "wsnmlp/channel.hpp"
#include "wsnmlp/dataset.hpp"
#include "wsnmlp/engine.hpp"
#include "wsnmlp/rng.hpp"
#include "wsnmlp/stat_models.hpp"

namespace {

using namespace wsnmlp;

void BM_TruncatedGaussianSample(benchmark::State& state) {
  DelayModel model;
  Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_truncated_gaussian(rng, model));
  }
}
BENCHMARK(BM_TruncatedGaussianSample);

void BM_DelaySample(benchmark::State& state) {
  DelayModel model;
  model.t_wait = 2.16;
  Rng rng(7);
  const int hops = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_delay(rng, hops, model));
  }
}
BENCHMARK(BM_DelaySample)->Arg(1)->Arg(3)->Arg(10);

void BM_LinkCycle(benchmark::State& state) {
  DelayModel model;
  model.t_wait = 2.16;
  LinkState link(0, 1, static_cast<int>(state.range(0)), 0.05, model, 0.5,
                 11, 12);
  std::uint64_t k = 0;
  for (auto _ : state) {
    ++k;
    link.transmit(k, 0.5);
    benchmark::DoNotOptimize(link.receive(k));
  }
}
BENCHMARK(BM_LinkCycle)->Arg(1)->Arg(3)->Arg(10);

void BM_TrainEpochIris(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.dataset_path = std::string(WSNMLP_DATA_DIR) + "/iris.csv";
  cfg.seed = 5;
  validate_config(cfg);
  ExperimentRun run(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run.run_epoch());
  }
}
BENCHMARK(BM_TrainEpochIris)->Unit(benchmark::kMillisecond);

void BM_Smote(benchmark::State& state) {
  Dataset ds;
  ds.name = "synthetic";
  ds.n_attributes = 2;
  ds.class_names = {"a", "b"};
  Rng fill(3);
  for (int i = 0; i < 220; ++i) {
    ds.features.push_back(fill.uniform01());
    ds.features.push_back(fill.uniform01());
    ds.labels.push_back(i < 200 ? 0 : 1);
  }
  for (auto _ : state) {
    Rng rng(9);
    benchmark::DoNotOptimize(smote(rng, ds, 5).size());
  }
}
BENCHMARK(BM_Smote);

}  // namespace

BENCHMARK_MAIN();
