// Micro benchmarks for the stages that dominate page processing time.
#include <benchmark/benchmark.h>

#include "scriptid/features.hpp"
#include "scriptid/layout.hpp"
#include "scriptid/mlp.hpp"
#include "scriptid/pipeline.hpp"
#include "scriptid/raster.hpp"
#include "scriptid/rng.hpp"
#include "scriptid/synth.hpp"

using namespace scriptid;

namespace {

GrayImage sample_gray_page() {
    DetRng rng(5);
    SyntheticPage page = compose_page(rng, 6, {});
    GrayImage gray = to_gray(page.image);
    return gray;
}

BinaryImage sample_page() {
    DetRng rng(5);
    return compose_page(rng, 6, {}).image;
}

void bm_binarize(benchmark::State& state) {
    GrayImage gray = sample_gray_page();
    for (auto _ : state) benchmark::DoNotOptimize(binarize(gray));
    state.SetItemsProcessed(state.iterations() * gray.width() * gray.height());
}
BENCHMARK(bm_binarize);

void bm_close_gaps(benchmark::State& state) {
    BinaryImage page = sample_page();
    for (auto _ : state) benchmark::DoNotOptimize(close_gaps(page));
}
BENCHMARK(bm_close_gaps);

void bm_despeckle(benchmark::State& state) {
    BinaryImage page = sample_page();
    for (auto _ : state) benchmark::DoNotOptimize(despeckle(page, 4, 20, 10.0));
}
BENCHMARK(bm_despeckle);

void bm_connected_components(benchmark::State& state) {
    BinaryImage page = preprocess_mask(sample_page(), {});
    for (auto _ : state) benchmark::DoNotOptimize(connected_components(page));
}
BENCHMARK(bm_connected_components);

void bm_segment_page(benchmark::State& state) {
    BinaryImage page = preprocess_mask(sample_page(), {});
    for (auto _ : state) benchmark::DoNotOptimize(segment_page(page));
}
BENCHMARK(bm_segment_page);

void bm_extract_features(benchmark::State& state) {
    DetRng rng(9);
    BinaryImage word = render_matra_word(rng, {});
    for (auto _ : state) benchmark::DoNotOptimize(extract_features(word));
}
BENCHMARK(bm_extract_features);

void bm_forward(benchmark::State& state) {
    MlpModel model = init_model(8, 12, 2, 1);
    std::vector<double> x = {0.9, 0.8, 0.6, 0.1, 0.2, 0.1, 0.3, 0.2};
    for (auto _ : state) benchmark::DoNotOptimize(forward(model, x));
}
BENCHMARK(bm_forward);

void bm_train_epoch(benchmark::State& state) {
    DetRng rng(3);
    std::vector<TrainSample> samples;
    for (int i = 0; i < 200; ++i) {
        TrainSample s;
        for (int k = 0; k < 8; ++k) s.input.push_back(rng.next_double());
        s.target = i % 2 == 0 ? std::vector<double>{0.9, 0.1}
                              : std::vector<double>{0.1, 0.9};
        samples.push_back(s);
    }
    TrainConfig cfg;
    cfg.epochs = 1;
    for (auto _ : state) {
        MlpModel model = init_model(8, 12, 2, 1);
        benchmark::DoNotOptimize(train_engine(model, samples, cfg));
    }
    state.SetItemsProcessed(state.iterations() * samples.size());
}
BENCHMARK(bm_train_epoch);

} // namespace

BENCHMARK_MAIN();
