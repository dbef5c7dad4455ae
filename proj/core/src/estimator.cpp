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

#include "fmsounder/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "fmsounder/errors.hpp"

namespace fmsounder
{

    std::vector<std::complex<double>> sliding_correlate(std::span<const std::complex<float>> rx,
                                                        const SoundingSequence &seq)
    {
        const std::size_t L = static_cast<std::size_t>(seq.length());
        if (L == 0)
            throw domain_error("InvalidArgument", "sequence has no chips");
        if (rx.size() < L)
            throw domain_error("InputTooShort", "received stream is shorter than one sequence period (" +
                                                    std::to_string(rx.size()) + " < " + std::to_string(L) + ")");

        // Deinterleave once so the inner products run over contiguous
        // doubles; chips are +-1 so the kernel is multiply-accumulate with
        // +-1.0 factors, which vectorizes well.
        const std::size_t n = rx.size();
        std::vector<double> re(n), im(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            re[i] = rx[i].real();
            im[i] = rx[i].imag();
        }
        std::vector<double> chips(L);
        for (std::size_t k = 0; k < L; ++k)
            chips[k] = static_cast<double>(seq.chips[k]);

        const double inv_L = 1.0 / static_cast<double>(L);
        std::vector<std::complex<double>> corr(n - L + 1);
        for (std::size_t i = 0; i + L <= n; ++i)
        {
            double s_re = 0.0, s_im = 0.0;
            const double *pr = re.data() + i;
            const double *pi = im.data() + i;
            for (std::size_t k = 0; k < L; ++k)
            {
                s_re += chips[k] * pr[k];
                s_im += chips[k] * pi[k];
            }
            corr[i] = {s_re * inv_L, s_im * inv_L};
        }
        return corr;
    }

    std::size_t align(std::span<const std::complex<double>> corr, int frame_len)
    {
        if (frame_len < 1)
            throw domain_error("InvalidArgument", "frame_len must be >= 1");
        if (corr.size() < static_cast<std::size_t>(frame_len))
            throw domain_error("InputTooShort", "correlation stream holds less than one frame");

        const std::size_t F = static_cast<std::size_t>(frame_len);
        std::vector<double> folded(F, 0.0);
        std::vector<std::size_t> counts(F, 0);
        for (std::size_t i = 0; i < corr.size(); ++i)
        {
            folded[i % F] += std::abs(corr[i]);
            counts[i % F] += 1;
        }
        std::size_t best = 0;
        double best_val = -1.0;
        for (std::size_t p = 0; p < F; ++p)
        {
            const double mean = folded[p] / static_cast<double>(counts[p]);
            if (mean > best_val)
            {
                best_val = mean;
                best = p;
            }
        }
        return best;
    }

    Cir extract_cir(std::span<const std::complex<double>> corr, int frame_len, std::size_t offset,
                    int window_len, int frame_index, double delay_resolution_us)
    {
        if (frame_len < 1 || window_len < 1 || frame_index < 0)
            throw domain_error("InvalidArgument", "frame_len and window_len must be >= 1, frame_index >= 0");
        const std::size_t base = offset + static_cast<std::size_t>(frame_index) * frame_len;
        if (base + window_len > corr.size())
            throw domain_error("NoCompleteFrame",
                               "frame " + std::to_string(frame_index) + " has no complete CIR window");
        Cir cir;
        cir.frame_index = frame_index;
        cir.delay_resolution_us = delay_resolution_us;
        cir.taps.assign(corr.begin() + base, corr.begin() + base + window_len);
        return cir;
    }

    AveragedCir average_cirs(std::span<const std::complex<double>> corr, int frame_len, std::size_t offset,
                             int window_len, AveragingMode mode)
    {
        if (frame_len < 1 || window_len < 1)
            throw domain_error("InvalidArgument", "frame_len and window_len must be >= 1");
        const std::size_t W = static_cast<std::size_t>(window_len);
        if (offset + W > corr.size())
            throw domain_error("NoCompleteFrame", "not even one complete CIR window fits the stream");

        const std::size_t F = static_cast<std::size_t>(frame_len);
        const std::size_t n_frames = (corr.size() - offset - W) / F + 1;

        AveragedCir out;
        out.mode = mode;
        out.n_averaged = static_cast<int>(n_frames);
        out.values.assign(W, 0.0);
        for (std::size_t a = 0; a < n_frames; ++a)
        {
            const std::size_t base = offset + a * F;
            if (mode == AveragingMode::magnitude)
            {
                for (std::size_t k = 0; k < W; ++k)
                    out.values[k] += std::abs(corr[base + k]);
            }
            else
            {
                for (std::size_t k = 0; k < W; ++k)
                    out.values[k] += std::norm(corr[base + k]);
            }
        }
        const double inv = 1.0 / static_cast<double>(n_frames);
        for (auto &v : out.values)
            v *= inv;
        return out;
    }

    Pdp to_pdp(const AveragedCir &avg, double delay_resolution_us)
    {
        if (avg.values.empty())
            throw domain_error("InvalidArgument", "averaged profile is empty");
        if (delay_resolution_us <= 0.0)
            throw domain_error("InvalidArgument", "delay resolution must be positive");

        Pdp pdp;
        pdp.n_averaged = avg.n_averaged;
        const std::size_t n = avg.values.size();
        pdp.delays_us.resize(n);
        pdp.power_linear.resize(n);
        pdp.power_db.resize(n);

        std::vector<double> linear(n);
        for (std::size_t k = 0; k < n; ++k)
            linear[k] = (avg.mode == AveragingMode::magnitude) ? avg.values[k] * avg.values[k] : avg.values[k];

        const double peak = *std::max_element(linear.begin(), linear.end());
        pdp.peak_linear_raw = peak;
        const double inv_peak = (peak > 0.0) ? 1.0 / peak : 1.0;
        for (std::size_t k = 0; k < n; ++k)
        {
            pdp.delays_us[k] = static_cast<double>(k) * delay_resolution_us;
            pdp.power_linear[k] = linear[k] * inv_peak;
            pdp.power_db[k] =
                (pdp.power_linear[k] > 0.0) ? 10.0 * std::log10(pdp.power_linear[k]) : Pdp::db_sentinel;
        }
        return pdp;
    }

    double estimate_noise_floor(const Pdp &pdp, std::optional<DelayRange> guard)
    {
        if (pdp.size() == 0)
            throw domain_error("EmptyGuard", "PDP is empty");

        DelayRange g;
        if (guard)
            g = *guard;
        else
        {
            // last 20% of the window
            const double span = pdp.delays_us.back() + pdp.delay_resolution_us();
            g.lo_us = pdp.delays_us.front() + 0.8 * span;
            g.hi_us = pdp.delays_us.back() + pdp.delay_resolution_us();
        }

        std::vector<double> region;
        for (std::size_t k = 0; k < pdp.size(); ++k)
            if (pdp.delays_us[k] >= g.lo_us && pdp.delays_us[k] < g.hi_us)
                region.push_back(pdp.power_db[k]);
        if (region.empty())
            throw domain_error("EmptyGuard", "guard region holds no delay bins");

        std::sort(region.begin(), region.end());
        const std::size_t n = region.size();
        return (n % 2 == 1) ? region[n / 2] : 0.5 * (region[n / 2 - 1] + region[n / 2]);
    }

    TapSet extract_taps(const Pdp &pdp, double threshold_db_above_floor)
    {
        if (threshold_db_above_floor < 0.0)
            throw domain_error("InvalidArgument", "threshold must be >= 0 dB");
        const double floor_db = pdp.noise_floor_db ? *pdp.noise_floor_db : estimate_noise_floor(pdp);
        const double cut = floor_db + threshold_db_above_floor;

        std::vector<std::size_t> kept;
        double peak_db = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < pdp.size(); ++k)
        {
            if (pdp.power_db[k] >= cut)
            {
                kept.push_back(k);
                peak_db = std::max(peak_db, pdp.power_db[k]);
            }
        }

        TapSet ts;
        if (kept.empty())
            return ts;
        const double first_delay = pdp.delays_us[kept.front()];
        for (std::size_t k : kept)
        {
            const double db = pdp.power_db[k] - peak_db;
            ts.taps.push_back({pdp.delays_us[k] - first_delay, db, std::pow(10.0, db / 20.0)});
        }
        return ts;
    }

} // namespace fmsounder
