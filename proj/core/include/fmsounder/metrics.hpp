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

#ifndef fmsounder_metrics_H
#define fmsounder_metrics_H

#include <cstddef>
#include <utility>
#include <vector>

#include "fmsounder/estimator.hpp"
#include "fmsounder/models.hpp"

namespace fmsounder
{

    inline constexpr double default_cluster_gap_us = 2.0;
    inline constexpr double default_cluster_rise_db = 3.0;
    inline constexpr double default_threshold_db = 12.0;

    // First moment of excess delay, power-weighted, relative to the first
    // tap. Throws EmptyTapSet.
    double mean_excess_delay_us(const TapSet &taps);

    // sqrt(second moment - mean^2). Throws EmptyTapSet.
    double rms_delay_spread_us(const TapSet &taps);

    // Largest tau_i - tau_first among taps within x_db of the peak.
    double max_excess_delay_us(const TapSet &taps, double x_db);

    // 50%-correlation approximation B_c = 1/(5*sigma_tau). Throws
    // ZeroSpread for sigma = 0.
    double coherence_bandwidth_hz(double rms_delay_spread_us);

    // Maximal runs of taps where consecutive delays differ by at most
    // gap_us AND power does not rise by more than rise_db (a sharp rise
    // marks a new arriving cluster; within one cluster power decays).
    std::vector<std::pair<std::size_t, std::size_t>> cluster_ranges(const TapSet &taps,
                                                                    double gap_us = default_cluster_gap_us,
                                                                    double rise_db = default_cluster_rise_db);
    int cluster_count(const TapSet &taps, double gap_us = default_cluster_gap_us,
                      double rise_db = default_cluster_rise_db);

    struct ClusterDelta
    {
        int index = 0;
        double pdp_peak_delay_us = 0.0;
        double pdp_peak_db = 0.0;
        double model_peak_delay_us = 0.0;
        double model_peak_db = 0.0;
        double delta_db = 0.0; // pdp - model peak power
    };

    struct CompareResidual
    {
        double delay_us = 0.0;
        double pdp_db = 0.0;
        double model_db = 0.0;
        double residual_db = 0.0;
    };

    struct CompareReport
    {
        double rmse_db = 0.0;
        int n_compared = 0;
        double noise_floor_db = 0.0;
        double threshold_db = 0.0;
        int pdp_cluster_count = 0;
        int model_cluster_count = 0;
        std::vector<ClusterDelta> cluster_deltas;
        std::vector<CompareResidual> residuals;
    };

    // Resamples the model on the PDP grid, normalizes both peaks to 0 dB
    // and computes the dB RMSE over bins where both curves sit above
    // noise floor + threshold (the shared dynamic range). Cluster counts
    // of both profiles use the same threshold. Throws EmptyTapSet for an
    // empty PDP or an empty comparison set.
    CompareReport compare(const Pdp &pdp, const PdpModel &model, double threshold_db = default_threshold_db,
                          double gap_us = default_cluster_gap_us, double rise_db = default_cluster_rise_db);

} // namespace fmsounder

#endif
