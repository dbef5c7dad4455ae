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

#include "fmsounder/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fmsounder/errors.hpp"

namespace fmsounder
{

    namespace
    {
        void require_taps(const TapSet &taps)
        {
            if (taps.empty())
                throw domain_error("EmptyTapSet", "metric requires a non-empty tap set");
        }

        struct Moments
        {
            double mean;
            double rms;
        };

        Moments tap_moments(const TapSet &taps)
        {
            const double t0 = taps.taps.front().delay_us;
            double p_sum = 0.0, m1 = 0.0, m2 = 0.0;
            for (const auto &t : taps.taps)
            {
                const double p = t.amplitude * t.amplitude;
                const double d = t.delay_us - t0;
                p_sum += p;
                m1 += p * d;
                m2 += p * d * d;
            }
            const double mean = m1 / p_sum;
            return {mean, std::sqrt(std::max(0.0, m2 / p_sum - mean * mean))};
        }
    } // namespace

    double mean_excess_delay_us(const TapSet &taps)
    {
        require_taps(taps);
        return tap_moments(taps).mean;
    }

    double rms_delay_spread_us(const TapSet &taps)
    {
        require_taps(taps);
        return tap_moments(taps).rms;
    }

    double max_excess_delay_us(const TapSet &taps, double x_db)
    {
        require_taps(taps);
        if (x_db < 0.0)
            throw domain_error("InvalidArgument", "x_db must be >= 0");
        double peak_db = -std::numeric_limits<double>::infinity();
        for (const auto &t : taps.taps)
            peak_db = std::max(peak_db, t.power_db);
        const double t0 = taps.taps.front().delay_us;
        double last = 0.0;
        for (const auto &t : taps.taps)
            if (t.power_db >= peak_db - x_db)
                last = t.delay_us - t0;
        return last;
    }

    double coherence_bandwidth_hz(double rms_delay_spread_us)
    {
        if (rms_delay_spread_us <= 0.0)
            throw domain_error("ZeroSpread", "coherence bandwidth is undefined for zero delay spread");
        return 1.0 / (5.0 * rms_delay_spread_us * 1.0e-6);
    }

    std::vector<std::pair<std::size_t, std::size_t>> cluster_ranges(const TapSet &taps, double gap_us,
                                                                    double rise_db)
    {
        require_taps(taps);
        if (gap_us <= 0.0)
            throw domain_error("InvalidArgument", "cluster gap must be positive");

        std::vector<std::pair<std::size_t, std::size_t>> ranges;
        std::size_t start = 0;
        for (std::size_t i = 1; i < taps.size(); ++i)
        {
            const bool gap_break = taps.taps[i].delay_us - taps.taps[i - 1].delay_us > gap_us;
            const bool rise_break = taps.taps[i].power_db - taps.taps[i - 1].power_db > rise_db;
            if (gap_break || rise_break)
            {
                ranges.emplace_back(start, i);
                start = i;
            }
        }
        ranges.emplace_back(start, taps.size());
        return ranges;
    }

    int cluster_count(const TapSet &taps, double gap_us, double rise_db)
    {
        return static_cast<int>(cluster_ranges(taps, gap_us, rise_db).size());
    }

    namespace
    {
        ClusterDelta peak_of_cluster(const TapSet &taps, std::size_t lo, std::size_t hi)
        {
            ClusterDelta d;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t i = lo; i < hi; ++i)
            {
                if (taps.taps[i].power_db > best)
                {
                    best = taps.taps[i].power_db;
                    d.pdp_peak_delay_us = taps.taps[i].delay_us;
                    d.pdp_peak_db = taps.taps[i].power_db;
                }
            }
            return d;
        }
    } // namespace

    CompareReport compare(const Pdp &pdp, const PdpModel &model, double threshold_db, double gap_us,
                          double rise_db)
    {
        if (pdp.size() == 0)
            throw domain_error("EmptyTapSet", "cannot compare an empty PDP");

        CompareReport report;
        report.threshold_db = threshold_db;
        report.noise_floor_db = pdp.noise_floor_db ? *pdp.noise_floor_db : estimate_noise_floor(pdp);
        const double cut = report.noise_floor_db + threshold_db;

        // Model resampled on the PDP grid, peak-normalized like the PDP.
        std::vector<double> model_db(pdp.size());
        double model_peak = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < pdp.size(); ++k)
        {
            model_db[k] = model.eval_alpha(pdp.delays_us[k]);
            model_peak = std::max(model_peak, model_db[k]);
        }
        for (auto &v : model_db)
            v -= model_peak;

        // RMSE over the shared dynamic range: bins where both curves clear
        // the floor+threshold cut.
        double sq_sum = 0.0;
        for (std::size_t k = 0; k < pdp.size(); ++k)
        {
            if (pdp.power_db[k] < cut || model_db[k] < cut)
                continue;
            const double resid = pdp.power_db[k] - model_db[k];
            report.residuals.push_back({pdp.delays_us[k], pdp.power_db[k], model_db[k], resid});
            sq_sum += resid * resid;
        }
        report.n_compared = static_cast<int>(report.residuals.size());
        if (report.n_compared == 0)
            throw domain_error("EmptyTapSet", "no delay bin clears the comparison threshold on both profiles");
        report.rmse_db = std::sqrt(sq_sum / report.n_compared);

        // Cluster structure of both profiles at the same cut.
        const TapSet pdp_taps = extract_taps(pdp, threshold_db);
        std::vector<Tap> model_kept;
        for (std::size_t k = 0; k < pdp.size(); ++k)
            if (model_db[k] >= cut)
                model_kept.push_back({pdp.delays_us[k], model_db[k], std::pow(10.0, model_db[k] / 20.0)});

        std::vector<std::pair<std::size_t, std::size_t>> pdp_ranges, model_ranges;
        if (!pdp_taps.empty())
        {
            pdp_ranges = cluster_ranges(pdp_taps, gap_us, rise_db);
            report.pdp_cluster_count = static_cast<int>(pdp_ranges.size());
        }
        TapSet model_ts;
        model_ts.taps = std::move(model_kept);
        if (!model_ts.empty())
        {
            model_ranges = cluster_ranges(model_ts, gap_us, rise_db);
            report.model_cluster_count = static_cast<int>(model_ranges.size());
        }

        // Per-cluster peak deltas, matched in delay order. extract_taps
        // re-references delays to the first kept tap; undo that so the two
        // profiles share the grid.
        double pdp_first_delay = 0.0;
        if (!pdp_taps.empty())
        {
            for (std::size_t k = 0; k < pdp.size(); ++k)
                if (pdp.power_db[k] >= cut)
                {
                    pdp_first_delay = pdp.delays_us[k];
                    break;
                }
        }
        const std::size_t n_matched = std::min(pdp_ranges.size(), model_ranges.size());
        for (std::size_t c = 0; c < n_matched; ++c)
        {
            ClusterDelta d = peak_of_cluster(pdp_taps, pdp_ranges[c].first, pdp_ranges[c].second);
            d.index = static_cast<int>(c);
            d.pdp_peak_delay_us += pdp_first_delay;
            const ClusterDelta md = peak_of_cluster(model_ts, model_ranges[c].first, model_ranges[c].second);
            d.model_peak_delay_us = md.pdp_peak_delay_us;
            d.model_peak_db = md.pdp_peak_db;
            d.delta_db = d.pdp_peak_db - d.model_peak_db;
            report.cluster_deltas.push_back(d);
        }
        return report;
    }

} // namespace fmsounder
