// SPDX-License-Identifier: Apache-2.0
//
// fmsounder  FM-band channel sounding simulation and PDP modeling toolkit
// Copyright (C) 2026 The fmsounder authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include "fmsounder/emulator.hpp"
#include "fmsounder/estimator.hpp"
#include "fmsounder/metrics.hpp"
#include "fmsounder/models.hpp"
#include "fmsounder/waveform.hpp"

namespace
{

    const fmsounder::SoundingSequence &default_sequence()
    {
        static const auto seq =
            fmsounder::generate_msequence(10, fmsounder::default_feedback_taps(10), 0x3FF);
        return seq;
    }

    std::vector<std::complex<float>> emulated_rx(int frames, unsigned seed)
    {
        const auto tx = fmsounder::frame_transmit_stream(default_sequence(), frames);
        const auto taps = fmsounder::sample_taps(fmsounder::builtin_hilly(), 1.0, -40.0);
        const auto ch = fmsounder::realize_channel(taps, 1.0e6, fmsounder::FadingMode::static_phase, seed);
        return fmsounder::add_awgn(fmsounder::apply_channel(tx, ch), 30.0, seed + 1);
    }

} // namespace

static void BM_GenerateMsequence(benchmark::State &state)
{
    const int order = static_cast<int>(state.range(0));
    const auto taps = fmsounder::default_feedback_taps(order);
    for (auto _ : state)
    {
        auto seq = fmsounder::generate_msequence(order, taps, (1ULL << order) - 1);
        benchmark::DoNotOptimize(seq);
    }
}
BENCHMARK(BM_GenerateMsequence)->Arg(10)->Arg(16);

static void BM_ApplyChannel(benchmark::State &state)
{
    const auto tx = fmsounder::frame_transmit_stream(default_sequence(), static_cast<int>(state.range(0)));
    const auto taps = fmsounder::sample_taps(fmsounder::builtin_bad_urban(), 1.0, -40.0);
    const auto ch = fmsounder::realize_channel(taps, 1.0e6, fmsounder::FadingMode::static_phase, 1);
    for (auto _ : state)
    {
        auto rx = fmsounder::apply_channel(tx, ch);
        benchmark::DoNotOptimize(rx);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tx.size()));
}
BENCHMARK(BM_ApplyChannel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_AddAwgn(benchmark::State &state)
{
    const auto tx = fmsounder::frame_transmit_stream(default_sequence(), static_cast<int>(state.range(0)));
    for (auto _ : state)
    {
        auto noisy = fmsounder::add_awgn(tx, 30.0, 7);
        benchmark::DoNotOptimize(noisy);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tx.size()));
}
BENCHMARK(BM_AddAwgn)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_SlidingCorrelate(benchmark::State &state)
{
    const auto rx = emulated_rx(static_cast<int>(state.range(0)), 1);
    for (auto _ : state)
    {
        auto corr = fmsounder::sliding_correlate(rx, default_sequence());
        benchmark::DoNotOptimize(corr);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rx.size()));
}
BENCHMARK(BM_SlidingCorrelate)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_AverageAndExtract(benchmark::State &state)
{
    const auto rx = emulated_rx(200, 1);
    const auto corr = fmsounder::sliding_correlate(rx, default_sequence());
    const auto offset = fmsounder::align(corr, default_sequence().frame_len());
    for (auto _ : state)
    {
        auto avg = fmsounder::average_cirs(corr, default_sequence().frame_len(), offset, 100);
        auto pdp = fmsounder::to_pdp(avg, 1.0);
        pdp.noise_floor_db = fmsounder::estimate_noise_floor(pdp);
        auto taps = fmsounder::extract_taps(pdp, 12.0);
        benchmark::DoNotOptimize(taps);
    }
}
BENCHMARK(BM_AverageAndExtract)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
