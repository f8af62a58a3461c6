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

#include "chanlqs/lqs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "chanlqs/errors.hpp"

namespace chanlqs
{

namespace
{
constexpr double speed_of_light = 299792458.0; // [m/s]
}

bool measure_curve::has_offset(long long offset) const
{
    return std::find(offsets.begin(), offsets.end(), offset) != offsets.end();
}

double measure_curve::avg_at(long long offset) const
{
    auto it = std::find(offsets.begin(), offsets.end(), offset);
    if (it == offsets.end())
        throw config_error("measure curve: offset not evaluated");
    return avg[static_cast<std::size_t>(it - offsets.begin())];
}

measure_curve average_measure(const std::vector<measure_pair> &pairs, long long offset_min,
                              long long offset_max)
{
    if (offset_min > offset_max)
        throw config_error("average_measure: empty offset range");

    std::map<long long, std::vector<double>> grouped;
    for (const measure_pair &p : pairs)
    {
        const long long offset = p.m_prime - p.m;
        if (offset >= offset_min && offset <= offset_max)
            grouped[offset].push_back(p.value);
    }

    measure_curve curve;
    if (!pairs.empty())
        curve.kind = pairs.front().kind;
    for (long long offset = offset_min; offset <= offset_max; ++offset)
    {
        auto it = grouped.find(offset);
        if (it == grouped.end())
            continue; // omitted, caller may warn
        std::vector<double> &vals = it->second;
        // canonical summation order makes the average independent of the
        // order in which pairs arrive
        std::sort(vals.begin(), vals.end());
        double mean = 0.0;
        for (double v : vals)
            mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals)
            var += (v - mean) * (v - mean);
        var /= static_cast<double>(vals.size()); // population convention
        curve.offsets.push_back(offset);
        curve.avg.push_back(mean);
        curve.std_dev.push_back(std::sqrt(var));
        curve.count.push_back(vals.size());
    }
    return curve;
}

lqs_result extract_lqs(const measure_curve &curve, double threshold, double bin_duration_s,
                       double mean_speed)
{
    if (!(threshold >= 0.0) || !(threshold <= 1.0))
        throw config_error("extract_lqs: threshold must lie in [0, 1]");
    if (!(bin_duration_s > 0.0))
        throw config_error("extract_lqs: bin duration must be > 0");
    if (!(mean_speed >= 0.0))
        throw config_error("extract_lqs: mean speed must be >= 0");
    if (curve.offsets.empty())
        throw config_error("extract_lqs: empty curve");

    auto zero_it = std::find(curve.offsets.begin(), curve.offsets.end(), 0ll);
    if (zero_it == curve.offsets.end())
        throw config_error("extract_lqs: curve must contain offset 0");
    const std::size_t zero_idx = static_cast<std::size_t>(zero_it - curve.offsets.begin());

    lqs_result res;
    res.threshold = threshold;
    if (!(curve.avg[zero_idx] > threshold))
    {
        res.degenerate = true;
        return res;
    }

    // Expand the run of consecutive evaluated offsets above the threshold;
    // a gap in the evaluated offsets breaks connectivity.
    std::size_t lo = zero_idx, hi = zero_idx;
    while (lo > 0 && curve.offsets[lo - 1] == curve.offsets[lo] - 1 &&
           curve.avg[lo - 1] > threshold)
        --lo;
    while (hi + 1 < curve.offsets.size() && curve.offsets[hi + 1] == curve.offsets[hi] + 1 &&
           curve.avg[hi + 1] > threshold)
        ++hi;

    res.set_size = hi - lo + 1;
    res.lqs_time = static_cast<double>(res.set_size) * bin_duration_s;
    res.lqs_distance = res.lqs_time * mean_speed;
    res.censored = (lo == 0) || (hi + 1 == curve.offsets.size());
    return res;
}

double measure_correlation(const std::vector<double> &a, const std::vector<double> &b)
{
    if (a.size() != b.size() || a.size() < 2)
        throw config_error("measure_correlation: need two equal sequences of length >= 2");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0)
        throw undefined_measure("measure_correlation: zero variance");
    return sab / std::sqrt(saa * sbb);
}

du_report du_check(double v_max_mps, double carrier_freq_hz, double tau_max_s,
                   double d_stat_min_m, double w_max_m, double ratio_threshold)
{
    if (!(v_max_mps > 0.0) || !(carrier_freq_hz > 0.0) || !(tau_max_s > 0.0) ||
        !(d_stat_min_m > 0.0) || !(w_max_m > 0.0) || !(ratio_threshold > 0.0))
        throw config_error("du_check: all inputs must be > 0");

    du_report rep;
    rep.ratio_threshold = ratio_threshold;
    rep.nu_max_hz = v_max_mps * carrier_freq_hz / speed_of_light;
    rep.tau_max_s = tau_max_s;
    rep.coherence_time_s = 1.0 / rep.nu_max_hz;
    rep.coherence_freq_hz = 1.0 / tau_max_s;
    rep.stationarity_time_s = d_stat_min_m / v_max_mps;
    rep.delta_nu_max_hz = 1.0 / rep.stationarity_time_s;
    rep.stationarity_freq_hz = speed_of_light / w_max_m;
    rep.delta_tau_max_s = 1.0 / rep.stationarity_freq_hz;
    rep.dispersion_product = rep.tau_max_s * rep.nu_max_hz;
    rep.correlation_product = rep.delta_tau_max_s * rep.delta_nu_max_hz;

    const double sin2 = rep.delta_nu_max_hz / (2.0 * rep.nu_max_hz);
    rep.angular_spread_rad = 2.0 * std::asin(std::sqrt(std::min(1.0, sin2)));

    rep.doubly_underspread =
        (rep.correlation_product / rep.dispersion_product < ratio_threshold) &&
        (rep.dispersion_product < ratio_threshold);
    return rep;
}

} // namespace chanlqs
