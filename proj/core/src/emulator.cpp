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

#include "fmsounder/emulator.hpp"

#include <cmath>

#include "fmsounder/errors.hpp"
#include "fmsounder/rng.hpp"

namespace fmsounder
{

    ChannelRealization realize_channel(const TapSet &taps, double sample_rate_hz, FadingMode mode,
                                       std::uint64_t seed, int frame_len)
    {
        if (taps.empty())
            throw domain_error("EmptyTapSet", "cannot realize a channel from an empty tap set");
        if (sample_rate_hz <= 0.0)
            throw domain_error("InvalidArgument", "sample rate must be positive");
        if (frame_len < 1)
            throw domain_error("InvalidArgument", "frame_len must be >= 1");

        ChannelRealization ch;
        ch.mode = mode;
        ch.seed = seed;
        ch.frame_len = frame_len;
        ch.sample_rate_hz = sample_rate_hz;

        const double us_per_sample = 1.0e6 / sample_rate_hz;
        ch.taps.reserve(taps.size());
        for (const auto &t : taps.taps)
        {
            const double samples = t.delay_us / us_per_sample;
            const long rounded = std::lround(samples);
            if (std::abs(t.delay_us - rounded * us_per_sample) > 1e-9)
                throw domain_error("OffGridDelay",
                                   "tap delay " + std::to_string(t.delay_us) +
                                       " us is not an integer number of samples at this rate");
            ch.taps.push_back({static_cast<int>(rounded), {0.0, 0.0}, t.amplitude});
        }

        Rng rng(seed);
        if (mode == FadingMode::static_phase)
        {
            for (auto &tap : ch.taps)
            {
                const double theta = rng.phase();
                tap.gain = tap.amplitude * std::complex<double>{std::cos(theta), std::sin(theta)};
            }
        }
        else
        {
            // Frame 0 of the block-fading stream; apply_channel regenerates
            // the same stream, so the stored gains match its first frame.
            for (auto &tap : ch.taps)
                tap.gain = tap.amplitude * rng.complex_normal();
        }
        return ch;
    }

    std::vector<std::complex<float>> apply_channel(std::span<const std::complex<float>> tx,
                                                   const ChannelRealization &channel)
    {
        if (tx.empty())
            throw domain_error("InvalidArgument", "transmit stream is empty");
        if (channel.taps.empty())
            throw domain_error("EmptyTapSet", "channel realization has no taps");

        const std::size_t n = tx.size();
        const std::size_t out_len = n + channel.max_delay_samples();
        std::vector<std::complex<double>> acc(out_len, {0.0, 0.0});

        if (channel.mode == FadingMode::static_phase)
        {
            for (const auto &tap : channel.taps)
            {
                const std::complex<double> g = tap.gain;
                const std::size_t d = static_cast<std::size_t>(tap.delay_samples);
                for (std::size_t i = 0; i < n; ++i)
                    acc[i + d] += g * std::complex<double>(tx[i]);
            }
        }
        else
        {
            // Gains follow the frame of the transmitted sample: a sample sent
            // in frame A arrives through frame A's channel draw.
            Rng rng(channel.seed);
            const std::size_t frame_len = static_cast<std::size_t>(channel.frame_len);
            std::vector<std::complex<double>> gains(channel.taps.size());
            for (std::size_t start = 0; start < n; start += frame_len)
            {
                for (std::size_t t = 0; t < channel.taps.size(); ++t)
                    gains[t] = channel.taps[t].amplitude * rng.complex_normal();
                const std::size_t stop = std::min(n, start + frame_len);
                for (std::size_t t = 0; t < channel.taps.size(); ++t)
                {
                    const std::complex<double> g = gains[t];
                    const std::size_t d = static_cast<std::size_t>(channel.taps[t].delay_samples);
                    for (std::size_t i = start; i < stop; ++i)
                        acc[i + d] += g * std::complex<double>(tx[i]);
                }
            }
        }

        std::vector<std::complex<float>> out(out_len);
        for (std::size_t i = 0; i < out_len; ++i)
            out[i] = std::complex<float>(static_cast<float>(acc[i].real()), static_cast<float>(acc[i].imag()));
        return out;
    }

    std::vector<std::complex<float>> add_awgn(std::span<const std::complex<float>> samples, double snr_db,
                                              std::uint64_t seed)
    {
        if (samples.empty())
            throw domain_error("ZeroSignalPower", "input stream is empty");
        if (std::isinf(snr_db) && snr_db > 0)
            return {samples.begin(), samples.end()}; // noise disabled

        double power = 0.0;
        for (const auto &s : samples)
            power += static_cast<double>(s.real()) * s.real() + static_cast<double>(s.imag()) * s.imag();
        power /= static_cast<double>(samples.size());
        if (power <= 0.0)
            throw domain_error("ZeroSignalPower", "input stream has zero power");

        const double noise_var = power / std::pow(10.0, snr_db / 10.0);
        const double sigma = std::sqrt(noise_var / 2.0); // per quadrature

        Rng rng(seed);
        std::vector<std::complex<float>> out(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            const auto [z0, z1] = rng.normal_pair();
            out[i] = std::complex<float>(static_cast<float>(samples[i].real() + sigma * z0),
                                         static_cast<float>(samples[i].imag() + sigma * z1));
        }
        return out;
    }

} // namespace fmsounder
