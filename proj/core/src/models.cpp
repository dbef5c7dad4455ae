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

#include "fmsounder/models.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "fmsounder/errors.hpp"

namespace fmsounder
{

    double PdpSegment::eval_db(double tau_us) const
    {
        const double tau_eff = (ref == DelayReference::segment_relative) ? tau_us - tau_lo_us : tau_us;
        return std::visit(
            [tau_eff](const auto &s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, LinearDb>)
                    return s.slope_db_per_us * tau_eff + s.intercept_db;
                else if constexpr (std::is_same_v<T, ExponentialDb>)
                    return s.scale_db * std::pow(s.base, tau_eff) + s.offset_db;
                else
                    return s.level_db;
            },
            shape);
    }

    double PdpModel::eval_alpha(double tau_us) const
    {
        if (tau_us < 0.0)
            throw domain_error("NegativeDelay", "delay must be >= 0 us");
        for (const auto &seg : segments)
            if (seg.contains(tau_us))
                return seg.eval_db(tau_us);
        return floor_db;
    }

    bool PdpModel::in_floor(double tau_us) const
    {
        if (tau_us < 0.0)
            throw domain_error("NegativeDelay", "delay must be >= 0 us");
        return std::none_of(segments.begin(), segments.end(),
                            [tau_us](const PdpSegment &s) { return s.contains(tau_us); });
    }

    PdpModel builtin_bad_urban()
    {
        PdpModel m;
        m.name = "bad_urban";
        m.floor_db = -78.0;
        m.max_delay_us = 60.0;
        m.segments = {
            {LinearDb{-1.7, 0.0}, 0.0, 10.0, DelayReference::absolute},
            {LinearDb{-1.76, 11.6}, 10.0, 35.0, DelayReference::absolute},
            // starts 23 dB below the peak; absolute delay would put it at -77.8 dB
            {ExponentialDb{55.0, 0.85, -78.0}, 35.0, std::numeric_limits<double>::infinity(),
             DelayReference::segment_relative},
        };
        return m;
    }

    PdpModel builtin_hilly()
    {
        PdpModel m;
        m.name = "hilly";
        m.floor_db = -30.5; // the "else" branch, also covers the [6.8, 11) gap
        m.max_delay_us = 20.0;
        m.segments = {
            {LinearDb{-8.6667, 0.0}, 0.0, 3.0, DelayReference::absolute},
            {LinearDb{-4.8684, 2.6053}, 3.0, 6.8, DelayReference::absolute},
            {LinearDb{-4.2857, 31.6429}, 11.0, 14.5, DelayReference::absolute},
        };
        return m;
    }

    void validate_model(const PdpModel &model)
    {
        if (model.max_delay_us <= 0.0)
            throw data_error("SchemaError", "max_delay_us must be positive");
        double prev_hi = 0.0;
        bool first = true;
        for (const auto &seg : model.segments)
        {
            if (seg.tau_lo_us < 0.0)
                throw data_error("NegativeInterval", "segment tau_lo must be >= 0");
            if (!(seg.tau_lo_us < seg.tau_hi_us))
                throw data_error("NegativeInterval", "segment interval must satisfy tau_lo < tau_hi");
            if (!first && seg.tau_lo_us < prev_hi)
                throw data_error("OverlappingSegments", "segments must be ordered and non-overlapping");
            if (const auto *e = std::get_if<ExponentialDb>(&seg.shape))
                if (!(e->base > 0.0 && e->base <= 1.0))
                    throw data_error("SchemaError", "exponential base must be in (0, 1]");
            prev_hi = seg.tau_hi_us;
            first = false;
        }
    }

    namespace
    {
        nlohmann::ordered_json segment_to_json(const PdpSegment &seg)
        {
            nlohmann::ordered_json j;
            std::visit(
                [&j](const auto &s) {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, LinearDb>)
                    {
                        j["kind"] = "linear_db";
                        j["slope"] = s.slope_db_per_us;
                        j["intercept"] = s.intercept_db;
                    }
                    else if constexpr (std::is_same_v<T, ExponentialDb>)
                    {
                        j["kind"] = "exponential_db";
                        j["scale"] = s.scale_db;
                        j["base"] = s.base;
                        j["offset"] = s.offset_db;
                    }
                    else
                    {
                        j["kind"] = "constant_db";
                        j["level"] = s.level_db;
                    }
                },
                seg.shape);
            j["tau_lo"] = seg.tau_lo_us;
            if (std::isfinite(seg.tau_hi_us))
                j["tau_hi"] = seg.tau_hi_us;
            else
                j["tau_hi"] = nullptr; // open-ended segment
            j["ref"] = (seg.ref == DelayReference::segment_relative) ? "segment_relative" : "absolute";
            return j;
        }

        PdpSegment segment_from_json(const nlohmann::json &j)
        {
            PdpSegment seg;
            const std::string kind = j.at("kind").get<std::string>();
            if (kind == "linear_db")
                seg.shape = LinearDb{j.at("slope").get<double>(), j.at("intercept").get<double>()};
            else if (kind == "exponential_db")
                seg.shape = ExponentialDb{j.at("scale").get<double>(), j.at("base").get<double>(),
                                          j.at("offset").get<double>()};
            else if (kind == "constant_db")
                seg.shape = ConstantDb{j.at("level").get<double>()};
            else
                throw data_error("SchemaError", "unknown segment kind '" + kind + "'");
            seg.tau_lo_us = j.at("tau_lo").get<double>();
            if (j.contains("tau_hi") && !j.at("tau_hi").is_null())
                seg.tau_hi_us = j.at("tau_hi").get<double>();
            else
                seg.tau_hi_us = std::numeric_limits<double>::infinity();
            const std::string ref = j.value("ref", "absolute");
            if (ref == "segment_relative")
                seg.ref = DelayReference::segment_relative;
            else if (ref == "absolute")
                seg.ref = DelayReference::absolute;
            else
                throw data_error("SchemaError", "unknown delay reference '" + ref + "'");
            return seg;
        }
    } // namespace

    PdpModel load_model(const std::string &config_text)
    {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(config_text);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw data_error("SchemaError", std::string("model config is not valid JSON: ") + e.what());
        }
        PdpModel m;
        try
        {
            m.name = j.at("name").get<std::string>();
            m.floor_db = j.at("floor_db").get<double>();
            m.max_delay_us = j.at("max_delay_us").get<double>();
            for (const auto &js : j.at("segments"))
                m.segments.push_back(segment_from_json(js));
        }
        catch (const nlohmann::json::exception &e)
        {
            throw data_error("SchemaError", std::string("model config is missing fields: ") + e.what());
        }
        validate_model(m);
        return m;
    }

    std::string model_to_json(const PdpModel &model)
    {
        nlohmann::ordered_json j;
        j["name"] = model.name;
        j["floor_db"] = model.floor_db;
        j["max_delay_us"] = model.max_delay_us;
        j["segments"] = nlohmann::ordered_json::array();
        for (const auto &seg : model.segments)
            j["segments"].push_back(segment_to_json(seg));
        return j.dump(2) + "\n";
    }

    double TapSet::total_linear_power() const
    {
        double acc = 0.0;
        for (const auto &t : taps)
            acc += t.amplitude * t.amplitude;
        return acc;
    }

    namespace
    {
        void normalize_unit_power(TapSet &ts)
        {
            const double total = ts.total_linear_power();
            if (total <= 0.0)
                throw domain_error("EmptyTapSet", "cannot normalize a tap set with zero total power");
            const double scale_db = 10.0 * std::log10(total);
            for (auto &t : ts.taps)
            {
                t.power_db -= scale_db;
                t.amplitude = std::pow(10.0, t.power_db / 20.0);
            }
            ts.normalization = TapNormalization::unit_total_power;
        }
    } // namespace

    TapSet make_tapset(std::vector<Tap> taps, TapNormalization normalization)
    {
        TapSet ts;
        ts.taps = std::move(taps);
        for (std::size_t i = 0; i < ts.taps.size(); ++i)
        {
            if (ts.taps[i].delay_us < 0.0)
                throw domain_error("NegativeDelay", "tap delays must be >= 0");
            if (i > 0 && !(ts.taps[i].delay_us > ts.taps[i - 1].delay_us))
                throw domain_error("InvalidArgument", "tap delays must be strictly ascending");
            ts.taps[i].amplitude = std::pow(10.0, ts.taps[i].power_db / 20.0);
        }
        if (normalization == TapNormalization::unit_total_power)
            normalize_unit_power(ts);
        return ts;
    }

    TapSet sample_taps(const PdpModel &model, double spacing_us, double min_power_db,
                       TapNormalization normalization, bool include_floor)
    {
        if (spacing_us <= 0.0)
            throw domain_error("InvalidArgument", "tap spacing must be positive");

        struct GridPoint
        {
            double delay;
            double db;
            bool floor;
        };
        std::vector<GridPoint> grid;
        const double eps = 1e-9;
        for (long k = 0;; ++k)
        {
            const double tau = k * spacing_us;
            if (tau > model.max_delay_us + eps)
                break;
            grid.push_back({tau, model.eval_alpha(tau), model.in_floor(tau)});
        }

        double peak = -std::numeric_limits<double>::infinity();
        for (const auto &g : grid)
            peak = std::max(peak, g.db);

        TapSet ts;
        for (const auto &g : grid)
        {
            if (g.floor && !include_floor)
                continue;
            if (g.db - peak < min_power_db)
                continue;
            ts.taps.push_back({g.delay, g.db, std::pow(10.0, g.db / 20.0)});
        }
        if (ts.taps.empty())
            throw domain_error("EmptyTapSet", "no grid point survives the power threshold");
        if (normalization == TapNormalization::unit_total_power)
            normalize_unit_power(ts);
        return ts;
    }

    Dispersion analytic_dispersion(const PdpModel &model, double spacing_us)
    {
        const TapSet ts = sample_taps(model, spacing_us, -std::numeric_limits<double>::infinity());
        const double t0 = ts.taps.front().delay_us;
        double p_sum = 0.0, m1 = 0.0, m2 = 0.0;
        for (const auto &t : ts.taps)
        {
            const double p = t.amplitude * t.amplitude;
            const double d = t.delay_us - t0;
            p_sum += p;
            m1 += p * d;
            m2 += p * d * d;
        }
        const double mean = m1 / p_sum;
        const double var = std::max(0.0, m2 / p_sum - mean * mean);
        return {mean, std::sqrt(var)};
    }

} // namespace fmsounder
