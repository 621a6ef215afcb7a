// Parallel kernels against their serial references, plus one tracker step.
// Thread count follows OMP_NUM_THREADS.

#include "ftlr/correlation.hpp"
#include "ftlr/core.hpp"
#include "ftlr/reference.hpp"
#include "ftlr/synth.hpp"
#include "ftlr/tracker.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace ftlr;

namespace {

Frame noise_frame(int side, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(0, 255);
    std::vector<unsigned char> px(static_cast<std::size_t>(side) * side);
    for (auto& p : px)
        p = static_cast<unsigned char>(d(rng));
    return Frame::from_8bit(side, side, px);
}

FeatureMap noise_map(int side, int channels, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    FeatureMap m(side, side, channels);
    for (double& v : m.values)
        v = n(rng);
    return m;
}

const BoundingBox kBox{100.0, 90.0, 32.0, 32.0};

void BM_CropPatch(benchmark::State& state)
{
    const Frame f = noise_frame(256, 1);
    const int side = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(crop_patch(f, kBox, 1.0, side));
}

void BM_CropPatchSerial(benchmark::State& state)
{
    const Frame f = noise_frame(256, 1);
    const int side = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::crop_patch(f, kBox, 1.0, side));
}

// Template side is half the search side, as in the tracker.
void BM_CorrelateDirect(benchmark::State& state)
{
    const int side = static_cast<int>(state.range(0));
    const FeatureMap t = noise_map(side / 2, 1, 2), s = noise_map(side, 1, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(cross_correlate_direct(t, s));
}

void BM_CorrelateFft(benchmark::State& state)
{
    const int side = static_cast<int>(state.range(0));
    const FeatureMap t = noise_map(side / 2, 1, 2), s = noise_map(side, 1, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(cross_correlate_fft(t, s));
}

void BM_CorrelateSerial(benchmark::State& state)
{
    const int side = static_cast<int>(state.range(0));
    const FeatureMap t = noise_map(side / 2, 1, 2), s = noise_map(side, 1, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::cross_correlate(t, s));
}

void BM_TrackStep(benchmark::State& state)
{
    SynthSpec spec;
    spec.frame_count = 2;
    spec.velocity_x = 2.0;
    const Sequence seq = generate_synthetic(spec);
    TrackerConfig cfg;
    cfg.variant = Variant::FtlrSa;
    for (auto _ : state) {
        state.PauseTiming();
        TrackerState s = track_init(seq.frames[0], seq.gt[0], cfg);
        state.ResumeTiming();
        benchmark::DoNotOptimize(track_step(s, seq.frames[1], cfg));
    }
}

} // namespace

BENCHMARK(BM_CropPatch)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_CropPatchSerial)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_CorrelateDirect)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_CorrelateFft)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_CorrelateSerial)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_TrackStep);

BENCHMARK_MAIN();
