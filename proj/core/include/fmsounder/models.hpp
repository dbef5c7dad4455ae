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

#ifndef fmsounder_models_H
#define fmsounder_models_H

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace fmsounder
{

    enum class DelayReference
    {
        absolute,        // tau_eff = tau
        segment_relative // tau_eff = tau - tau_lo
    };

    struct LinearDb
    {
        double slope_db_per_us = 0.0;
        double intercept_db = 0.0;
    };

    // value = scale_db * base^tau_eff + offset_db, base in (0, 1]
    struct ExponentialDb
    {
        double scale_db = 0.0;
        double base = 1.0;
        double offset_db = 0.0;
    };

    struct ConstantDb
    {
        double level_db = 0.0;
    };

    // One piece of a piecewise PDP-vs-delay curve on [tau_lo, tau_hi).
    struct PdpSegment
    {
        std::variant<LinearDb, ExponentialDb, ConstantDb> shape;
        double tau_lo_us = 0.0;
        double tau_hi_us = std::numeric_limits<double>::infinity();
        DelayReference ref = DelayReference::absolute;

        bool contains(double tau_us) const { return tau_us >= tau_lo_us && tau_us < tau_hi_us; }
        double eval_db(double tau_us) const;
    };

    // Piecewise analytic power-delay-profile model, power in dB vs excess
    // delay in microseconds. Segments are ordered, left-closed/right-open
    // and non-overlapping; delays outside every segment evaluate to
    // floor_db.
    struct PdpModel
    {
        std::string name;
        std::vector<PdpSegment> segments;
        double floor_db = -100.0;
        double max_delay_us = 60.0;

        // Total on tau >= 0; throws NegativeDelay below zero.
        double eval_alpha(double tau_us) const;
        // True when no segment contains tau (the floor applies).
        bool in_floor(double tau_us) const;
    };

    // FM-band bad-urban model: -1.7*tau on [0,10), -1.76*tau+11.6 on
    // [10,35), 55*0.85^(tau-35)-78 on [35,inf).
    PdpModel builtin_bad_urban();

    // FM-band multi-cluster hilly-terrain model: -8.6667*tau on [0,3),
    // -4.8684*tau+2.6053 on [3,6.8), -4.2857*tau+31.6429 on [11,14.5),
    // -30.5 dB elsewhere.
    PdpModel builtin_hilly();

    // Throws SchemaError / NegativeInterval / OverlappingSegments.
    void validate_model(const PdpModel &model);

    PdpModel load_model(const std::string &config_text);
    std::string model_to_json(const PdpModel &model);

    enum class TapNormalization
    {
        none,
        unit_total_power
    };

    struct Tap
    {
        double delay_us = 0.0;
        double power_db = 0.0;
        double amplitude = 1.0; // 10^(power_db/20)
    };

    // Discrete (delay, power) multipath taps, delays strictly ascending.
    struct TapSet
    {
        std::vector<Tap> taps;
        TapNormalization normalization = TapNormalization::none;

        bool empty() const { return taps.empty(); }
        std::size_t size() const { return taps.size(); }
        double total_linear_power() const;
    };

    TapSet make_tapset(std::vector<Tap> taps, TapNormalization normalization = TapNormalization::none);

    // Discretizes the model on the grid 0, spacing, 2*spacing, ...,
    // max_delay_us. Grid points with power below the grid peak plus
    // min_power_db are dropped; floor-only points are dropped unless
    // include_floor is set. Throws EmptyTapSet when nothing survives.
    TapSet sample_taps(const PdpModel &model, double spacing_us, double min_power_db,
                       TapNormalization normalization = TapNormalization::none, bool include_floor = false);

    struct Dispersion
    {
        double mean_excess_delay_us = 0.0;
        double rms_delay_spread_us = 0.0;
    };

    // Power-weighted first/second moments of the discretized model (full
    // dynamic range, floor excluded), delays relative to the first tap.
    Dispersion analytic_dispersion(const PdpModel &model, double spacing_us);

} // namespace fmsounder

#endif
