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

#include "fmsounder/waveform.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "fmsounder/errors.hpp"

namespace fmsounder
{

    namespace
    {
        constexpr int min_order = 2;
        constexpr int max_order = 20; // 2^20-1 chips is already ~1M samples per frame

        void validate_taps(int order, const std::vector<int> &taps)
        {
            if (order < min_order || order > max_order)
                throw domain_error("InvalidArgument",
                                   "sequence order must be in [" + std::to_string(min_order) + ", " +
                                       std::to_string(max_order) + "], got " + std::to_string(order));
            if (taps.empty())
                throw domain_error("InvalidArgument", "feedback tap set is empty");
            std::set<int> uniq(taps.begin(), taps.end());
            if (uniq.size() != taps.size())
                throw domain_error("InvalidArgument", "feedback taps contain duplicates");
            if (*uniq.rbegin() != order)
                throw domain_error("InvalidArgument", "feedback taps must contain the order (x^m term)");
            if (*uniq.begin() < 1)
                throw domain_error("InvalidArgument", "feedback taps must be in [1, order]");
        }

        // Recurrence lags: a[n] = a[n-m] XOR (xor over k in taps\{m} of a[n-(m-k)]).
        std::vector<int> recurrence_lags(int order, const std::vector<int> &taps)
        {
            std::vector<int> lags{order};
            for (int k : taps)
                if (k != order)
                    lags.push_back(order - k);
            std::sort(lags.begin(), lags.end());
            return lags;
        }
    } // namespace

    std::vector<int> default_feedback_taps(int order)
    {
        // Primitive polynomials over GF(2); trinomials where one exists.
        switch (order)
        {
        case 2: return {2, 1};
        case 3: return {3, 1};
        case 4: return {4, 1};
        case 5: return {5, 2};
        case 6: return {6, 1};
        case 7: return {7, 1};
        case 8: return {8, 4, 3, 2}; // no primitive trinomial of degree 8
        case 9: return {9, 4};
        case 10: return {10, 3};
        case 11: return {11, 2};
        case 12: return {12, 6, 4, 1};
        case 13: return {13, 4, 3, 1};
        case 14: return {14, 5, 3, 1};
        case 15: return {15, 1};
        case 16: return {16, 5, 3, 2};
        default:
            throw domain_error("NoDefaultTaps",
                               "no default feedback taps for order " + std::to_string(order) +
                                   "; pass the polynomial explicitly");
        }
    }

    SoundingSequence generate_msequence(int order, std::vector<int> feedback_taps, std::uint64_t seed,
                                        int pad_len, double chip_rate_hz)
    {
        validate_taps(order, feedback_taps);
        if (pad_len < 0)
            throw domain_error("InvalidArgument", "pad_len must be >= 0");
        if (chip_rate_hz <= 0.0)
            throw domain_error("InvalidArgument", "chip_rate_hz must be positive");

        const std::uint64_t mask = (order == 64) ? ~0ULL : ((1ULL << order) - 1);
        const std::uint64_t state0 = seed & mask;
        if (state0 == 0)
            throw domain_error("ZeroSeed", "the LFSR seed must not be all-zeros");

        const long length = (1L << order) - 1;
        const auto lags = recurrence_lags(order, feedback_taps);

        // Walk the state cycle first: a maximal sequence visits all 2^m - 1
        // nonzero states before returning to the seed.
        std::uint64_t state = state0;
        for (long step = 1; step <= length; ++step)
        {
            std::uint64_t bit = state & 1ULL; // a[n], the oldest chip in the register
            for (int k : feedback_taps)
                if (k != order)
                    bit ^= (state >> k) & 1ULL; // a[n+k]
            state = (state >> 1) | (bit << (order - 1));
            if (state == state0 && step < length)
                throw domain_error("NonPrimitivePolynomial",
                                   "LFSR state cycle has period " + std::to_string(step) + " < " +
                                       std::to_string(length) + "; the feedback polynomial is not primitive");
        }
        if (state != state0)
            throw domain_error("NonPrimitivePolynomial",
                               "LFSR state cycle does not return to the seed within 2^order - 1 steps");

        SoundingSequence seq;
        seq.order = order;
        seq.feedback_taps = std::move(feedback_taps);
        std::sort(seq.feedback_taps.begin(), seq.feedback_taps.end(), std::greater<int>());
        seq.seed = state0;
        seq.pad_len = pad_len;
        seq.chip_rate_hz = chip_rate_hz;

        std::vector<std::uint8_t> bits(static_cast<std::size_t>(length));
        for (int i = 0; i < order; ++i)
            bits[i] = static_cast<std::uint8_t>((state0 >> i) & 1ULL);
        for (long n = order; n < length; ++n)
        {
            std::uint8_t b = 0;
            for (int d : lags)
                b ^= bits[n - d];
            bits[n] = b;
        }

        seq.chips.resize(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            seq.chips[i] = bits[i] ? std::int8_t{1} : std::int8_t{-1};
        return seq;
    }

    long periodic_autocorrelation(const SoundingSequence &seq, int lag)
    {
        const int L = seq.length();
        if (L == 0)
            throw domain_error("InvalidArgument", "sequence has no chips");
        if (lag < 0 || lag >= L)
            throw domain_error("InvalidArgument",
                               "lag must be in [0, " + std::to_string(L - 1) + "], got " + std::to_string(lag));
        long acc = 0;
        for (int k = 0; k < L; ++k)
        {
            int j = k + lag;
            if (j >= L)
                j -= L;
            acc += static_cast<long>(seq.chips[k]) * static_cast<long>(seq.chips[j]);
        }
        return acc;
    }

    std::vector<std::complex<float>> frame_transmit_stream(const SoundingSequence &seq, int repetitions)
    {
        if (repetitions < 1)
            throw domain_error("InvalidArgument", "repetitions must be >= 1");
        const int L = seq.length();
        if (L == 0)
            throw domain_error("InvalidArgument", "sequence has no chips");

        std::vector<std::complex<float>> out;
        out.reserve(static_cast<std::size_t>(repetitions) * seq.frame_len());
        for (int r = 0; r < repetitions; ++r)
        {
            for (int k = 0; k < L; ++k)
                out.emplace_back(static_cast<float>(seq.chips[k]), 0.0f);
            out.insert(out.end(), seq.pad_len, std::complex<float>{0.0f, 0.0f});
        }
        return out;
    }

    std::string sequence_to_json(const SoundingSequence &seq)
    {
        char seed_hex[32];
        std::snprintf(seed_hex, sizeof(seed_hex), "0x%llX", static_cast<unsigned long long>(seq.seed));
        nlohmann::ordered_json j;
        j["order"] = seq.order;
        j["taps"] = seq.feedback_taps;
        j["seed"] = seed_hex;
        j["pad_len"] = seq.pad_len;
        j["chip_rate_hz"] = seq.chip_rate_hz;
        return j.dump(2) + "\n";
    }

    SoundingSequence sequence_from_json(const std::string &text)
    {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw data_error("SchemaError", std::string("sequence spec is not valid JSON: ") + e.what());
        }
        try
        {
            const int order = j.at("order").get<int>();
            std::vector<int> taps = j.at("taps").get<std::vector<int>>();
            std::uint64_t seed = 0;
            const auto &js = j.at("seed");
            if (js.is_string())
                seed = std::stoull(js.get<std::string>(), nullptr, 0);
            else
                seed = js.get<std::uint64_t>();
            const int pad = j.value("pad_len", 77);
            const double rate = j.value("chip_rate_hz", 1.0e6);
            return generate_msequence(order, std::move(taps), seed, pad, rate);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw data_error("SchemaError", std::string("sequence spec is missing fields: ") + e.what());
        }
        catch (const std::invalid_argument &)
        {
            throw data_error("SchemaError", "sequence seed is not a parsable integer");
        }
    }

} // namespace fmsounder
