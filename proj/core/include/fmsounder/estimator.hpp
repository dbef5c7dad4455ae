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

#ifndef fmsounder_estimator_H
#define fmsounder_estimator_H

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fmsounder/models.hpp"
#include "fmsounder/waveform.hpp"

namespace fmsounder
{

    // corr[i] = (1/L) * sum_k rx[i+k] * chips[k], i = 0 .. len(rx)-L.
    // Direct time-domain computation; a unit-gain single-tap channel yields
    // peak magnitude ~= 1. Throws InputTooShort for len(rx) < L.
    std::vector<std::complex<double>> sliding_correlate(std::span<const std::complex<float>> rx,
                                                        const SoundingSequence &seq);

    // Strongest-path arrival phase within the frame: argmax of mean |corr|
    // folded modulo frame_len.
    std::size_t align(std::span<const std::complex<double>> corr, int frame_len);

    // One instantaneous CIR: the correlator output over a single frame's
    // window. Delay 0 is the aligned strongest-path arrival.
    struct Cir
    {
        std::vector<std::complex<double>> taps;
        double delay_resolution_us = 1.0;
        int frame_index = 0;
    };

    // Slices frame `frame_index`'s CIR out of the correlation stream.
    Cir extract_cir(std::span<const std::complex<double>> corr, int frame_len, std::size_t offset,
                    int window_len, int frame_index, double delay_resolution_us = 1.0);

    enum class AveragingMode
    {
        magnitude, // mean of |h| per delay bin, the primary path
        power      // mean of |h|^2, for comparison
    };

    struct AveragedCir
    {
        std::vector<double> values; // |h| or |h|^2 per delay bin
        int n_averaged = 0;         // number of complete frames
        AveragingMode mode = AveragingMode::magnitude;
    };

    // Non-coherent average over complete frames: values[k] = mean over A of
    // |corr[offset + k + frame_len*A]|. Throws NoCompleteFrame when not even
    // one full window fits.
    AveragedCir average_cirs(std::span<const std::complex<double>> corr, int frame_len, std::size_t offset,
                             int window_len, AveragingMode mode = AveragingMode::magnitude);

    // Estimated power delay profile on a uniform delay grid. Both power
    // views are peak-normalized (linear peak = 1, dB peak = 0); zero bins
    // map to db_sentinel in the dB view.
    struct Pdp
    {
        static constexpr double db_sentinel = -400.0;

        std::vector<double> delays_us;
        std::vector<double> power_linear;
        std::vector<double> power_db;
        int n_averaged = 0;
        double peak_linear_raw = 0.0; // pre-normalization peak, for traceability
        std::optional<double> noise_floor_db;

        std::size_t size() const { return delays_us.size(); }
        double delay_resolution_us() const { return delays_us.size() > 1 ? delays_us[1] - delays_us[0] : 0.0; }
    };

    // Squares the averaged profile (magnitude mode) or takes it as-is
    // (power mode) and normalizes the peak to 0 dB.
    Pdp to_pdp(const AveragedCir &avg, double delay_resolution_us);

    struct DelayRange
    {
        double lo_us = 0.0;
        double hi_us = 0.0; // [lo, hi)
    };

    // Median dB power over a guard region assumed to hold no paths;
    // defaults to the last 20% of the window. Throws EmptyGuard.
    double estimate_noise_floor(const Pdp &pdp, std::optional<DelayRange> guard = std::nullopt);

    // All grid points at least threshold_db above the noise floor, powers
    // re-referenced to the kept peak (0 dB) and delays to the first kept
    // tap. May return an empty TapSet. Uses pdp.noise_floor_db when set,
    // otherwise estimates it with the default guard.
    TapSet extract_taps(const Pdp &pdp, double threshold_db_above_floor);

} // namespace fmsounder

#endif
