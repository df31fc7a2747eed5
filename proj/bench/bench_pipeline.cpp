// Serial reference vs OpenMP batch kernels over the default synthetic set.
#include <benchmark/benchmark.h>

#include "devink/pipeline.hpp"
#include "devink/synth.hpp"

namespace {

const devink::Dataset& corpus() {
  static const devink::Dataset d = [] {
    devink::synth::SynthConfig cfg;
    cfg.primitives = devink::synth::default_primitives();
    return devink::synth::generate_synthetic(cfg);
  }();
  return d;
}

devink::PipelineConfig config_for(int classifier) {
  devink::PipelineConfig cfg;
  cfg.classifier = static_cast<devink::ClassifierKind>(classifier);
  if (cfg.classifier == devink::ClassifierKind::dtw) cfg.feature = devink::features::FeatureKind::edf;
  return cfg;
}

void BM_ExtractSerial(benchmark::State& state) {
  const auto cfg = config_for(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(devink::pipeline::serial::extract_all(corpus().strokes, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().strokes.size()));
}

void BM_ExtractParallel(benchmark::State& state) {
  const auto cfg = config_for(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(devink::pipeline::extract_all(corpus().strokes, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().strokes.size()));
}

template <bool Parallel>
void BM_Rank(benchmark::State& state) {
  const auto cfg = config_for(static_cast<int>(state.range(0)));
  const auto feats = devink::pipeline::extract_all(corpus().strokes, cfg);
  const auto model = devink::pipeline::train(feats, cfg);
  // DTW scores every query against every template, so queries are a slice.
  const std::span<const devink::pipeline::StrokeFeatures> queries(feats.data(), 200);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(devink::pipeline::rank_all(model, queries));
    } else {
      benchmark::DoNotOptimize(devink::pipeline::serial::rank_all(model, queries));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(queries.size()));
}

}  // namespace

BENCHMARK(BM_ExtractSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractParallel)->Unit(benchmark::kMillisecond);
// 0 = gaussian, 1 = dtw, 2 = svm
BENCHMARK(BM_Rank<false>)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rank<true>)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
