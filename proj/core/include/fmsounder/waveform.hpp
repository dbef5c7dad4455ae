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

#ifndef fmsounder_waveform_H
#define fmsounder_waveform_H

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace fmsounder
{

    // Maximal-length sounding sequence plus the framing parameters of the
    // transmitted baseband stream (L chips followed by pad_len zeros,
    // repeated back to back).
    //
    // Chips are generated by the Fibonacci LFSR recurrence
    //     a[n] = a[n-m] XOR (XOR over k in taps\{m} of a[n-(m-k)])
    // for the feedback polynomial x^m + sum_k x^k + 1, with a[0..m-1] taken
    // from the seed (bit i of the seed is a[i]) and bit 1 -> +1, 0 -> -1.
    //
    // The seed selects the sequence phase. Because the frame is zero-padded,
    // the correlator sees aperiodic partial sums inside the guard window and
    // their size depends on the phase; 0x1F3 is the m=10/{10,3} phase with
    // the smallest worst-case head autocorrelation over lags 1..99
    // (max |A| = 11, exhaustive search over all 1023 phases).
    inline constexpr std::uint64_t default_m10_seed = 0x1F3;

    struct SoundingSequence
    {
        int order = 10;                      // register length m
        std::vector<int> feedback_taps;      // polynomial exponents, contains `order`
        std::uint64_t seed = default_m10_seed; // initial register contents, never all-zero
        std::vector<std::int8_t> chips;      // +1/-1, length 2^order - 1
        int pad_len = 77;                    // trailing zeros per frame
        double chip_rate_hz = 1.0e6;

        int length() const { return static_cast<int>(chips.size()); }
        int frame_len() const { return length() + pad_len; }
        double chip_duration_us() const { return 1.0e6 / chip_rate_hz; }
        double frame_duration_us() const { return frame_len() * chip_duration_us(); }
    };

    // Known-primitive feedback taps for register lengths 2..16. Throws
    // domain NoDefaultTaps outside the table.
    std::vector<int> default_feedback_taps(int order);

    // Generates the sequence and verifies maximality by walking the LFSR
    // state cycle; a cycle shorter than 2^order - 1 throws
    // NonPrimitivePolynomial, an all-zero seed throws ZeroSeed.
    SoundingSequence generate_msequence(int order, std::vector<int> feedback_taps, std::uint64_t seed,
                                        int pad_len = 77, double chip_rate_hz = 1.0e6);

    // Sum over k of chips[k]*chips[(k+lag) mod L], exact integer arithmetic.
    // L at lag 0, -1 elsewhere for any maximal sequence.
    long periodic_autocorrelation(const SoundingSequence &seq, int lag);

    // The repeated transmit stream: `repetitions` frames of the chips as
    // unit-amplitude real samples followed by pad_len zeros, one sample per
    // chip.
    std::vector<std::complex<float>> frame_transmit_stream(const SoundingSequence &seq, int repetitions);

    // Sequence spec JSON, e.g.
    // {"order":10,"taps":[10,3],"seed":"0x3FF","pad_len":77,"chip_rate_hz":1000000.0}
    std::string sequence_to_json(const SoundingSequence &seq);
    SoundingSequence sequence_from_json(const std::string &text);

} // namespace fmsounder

#endif
