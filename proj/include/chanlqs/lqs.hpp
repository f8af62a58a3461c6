// SPDX-License-Identifier: Apache-2.0
//
// chanlqs - non-stationarity analysis of MIMO radio channels
// Copyright (C) 2026 the chanlqs authors
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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chanlqs/measures.hpp"

namespace chanlqs
{

/// Scenario-averaged measure values over time-bin offsets, with per-offset
/// population standard deviation and pair counts. Offsets with no valid pair
/// are omitted from the curve.
struct measure_curve
{
    measure_kind kind = measure_kind::col_doppler;
    std::vector<long long> offsets; // consecutive where evaluated, includes 0
    std::vector<double> avg;
    std::vector<double> std_dev;
    std::vector<std::size_t> count;
    std::string scenario_id;

    bool has_offset(long long offset) const;
    double avg_at(long long offset) const;
};

struct lqs_result
{
    double threshold = 0.0;
    double lqs_time = 0.0;     // [s]
    double lqs_distance = 0.0; // [m]
    std::size_t set_size = 0;  // |C|
    bool censored = false;     // C reaches the evaluated offset boundary
    bool degenerate = false;   // avg[0] <= threshold, LQS time reported as 0
};

/// Underspread report: dispersion and correlation spreads, coherence and
/// stationarity scales, and the verdict of the two "much smaller" tests.
struct du_report
{
    double nu_max_hz = 0.0;
    double tau_max_s = 0.0;
    double delta_nu_max_hz = 0.0;
    double delta_tau_max_s = 0.0;
    double coherence_time_s = 0.0;
    double coherence_freq_hz = 0.0;
    double stationarity_time_s = 0.0;
    double stationarity_freq_hz = 0.0;
    double dispersion_product = 0.0;  // tau_max * nu_max
    double correlation_product = 0.0; // delta_tau_max * delta_nu_max
    double angular_spread_rad = 0.0;  // from delta_nu_max = 2 nu_max sin^2(delta/2)
    double ratio_threshold = 0.1;     // operationalization of "much smaller"
    bool doubly_underspread = false;
};

/// Averages a stream of pairwise measures per offset over [offset_min,
/// offset_max]. Offsets without any pair are omitted.
measure_curve average_measure(const std::vector<measure_pair> &pairs, long long offset_min,
                              long long offset_max);

/// Thresholds the averaged curve: M = {offset : avg > threshold}, C = the
/// maximal run of consecutive evaluated offsets in M containing 0. LQS time is
/// |C| * bin_duration, mapped to distance with the scenario mean speed. The
/// result is censored when C reaches the evaluated boundary.
lqs_result extract_lqs(const measure_curve &curve, double threshold, double bin_duration_s,
                       double mean_speed);

/// Pearson correlation coefficient of two equally long measure sequences.
double measure_correlation(const std::vector<double> &a, const std::vector<double> &b);

/// Rough doubly-underspread check from scenario bounds; "much smaller" is
/// operationalized as a ratio below ratio_threshold.
du_report du_check(double v_max_mps, double carrier_freq_hz, double tau_max_s,
                   double d_stat_min_m, double w_max_m, double ratio_threshold = 0.1);

} // namespace chanlqs
