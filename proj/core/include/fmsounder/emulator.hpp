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

#ifndef fmsounder_emulator_H
#define fmsounder_emulator_H

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fmsounder/models.hpp"

namespace fmsounder
{

    enum class FadingMode
    {
        static_phase,  // one complex gain per tap for the whole capture
        block_rayleigh // gains redrawn per frame, CN(0, amplitude^2)
    };

    struct ChannelTap
    {
        int delay_samples = 0;
        std::complex<double> gain; // frame-0 gain in block_rayleigh mode
        double amplitude = 0.0;    // |gain| in static mode, E|gain|^2 = amplitude^2 in block mode
    };

    // Tapped-delay-line realization of a TapSet on the sample grid.
    struct ChannelRealization
    {
        std::vector<ChannelTap> taps; // strictly ascending delays
        FadingMode mode = FadingMode::static_phase;
        std::uint64_t seed = 0;
        int frame_len = 1100; // block-fading boundary, in samples
        double sample_rate_hz = 1.0e6;

        int max_delay_samples() const { return taps.empty() ? 0 : taps.back().delay_samples; }
    };

    // Quantizes tap delays to the sample grid (tolerance 1e-9 us, else
    // OffGridDelay). static_phase draws per-tap phases uniform [0,2*pi)
    // from the seed; block_rayleigh draws per-frame circularly-symmetric
    // complex Gaussian gains, frame-major then tap order.
    ChannelRealization realize_channel(const TapSet &taps, double sample_rate_hz, FadingMode mode,
                                       std::uint64_t seed, int frame_len = 1100);

    // out[n] = sum_i gain_i * tx[n - delay_i], output length = input length
    // plus the maximum tap delay. In block_rayleigh mode the gain follows
    // the frame of the *transmitted* sample.
    std::vector<std::complex<float>> apply_channel(std::span<const std::complex<float>> tx,
                                                   const ChannelRealization &channel);

    // Adds i.i.d. circularly-symmetric complex Gaussian noise with variance
    // mean(|x|^2) / 10^(snr_db/10). snr_db = +infinity returns the input
    // unchanged; all-zero input throws ZeroSignalPower.
    std::vector<std::complex<float>> add_awgn(std::span<const std::complex<float>> samples, double snr_db,
                                              std::uint64_t seed);

} // namespace fmsounder

#endif
