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

#include "chanlqs/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include <armadillo>

#include "chanlqs/errors.hpp"

namespace chanlqs
{

namespace
{

// Median of the weakest quartile (at least one bin) of the given powers.
double weak_quartile_median(const arma::vec &powers)
{
    arma::vec sorted = arma::sort(powers);
    const std::size_t nq = std::max<std::size_t>(1, sorted.n_elem / 4);
    if (nq % 2 == 1)
        return sorted(nq / 2);
    return 0.5 * (sorted(nq / 2 - 1) + sorted(nq / 2));
}

} // namespace

channel_tensor apply_noise_floor(const channel_tensor &t, double margin_db)
{
    if (!(margin_db >= 0.0) || !std::isfinite(margin_db))
        throw config_error("apply_noise_floor: margin_db must be >= 0");
    if (t.grid.n_freq < 4)
        throw insufficient_data("apply_noise_floor: need at least 4 frequency samples");

    const double margin = std::pow(10.0, margin_db / 10.0);
    channel_tensor out = t;

    arma::cx_vec row(t.grid.n_freq);
    for (std::size_t m = 0; m < t.grid.n_time; ++m)
    {
        for (std::size_t k = 0; k < t.n_rx; ++k)
        {
            for (std::size_t l = 0; l < t.n_tx; ++l)
            {
                for (std::size_t q = 0; q < t.grid.n_freq; ++q)
                    row(q) = t.at(m, q, k, l);

                // Frequency-to-delay direction matches the transfer-function
                // convention, i.e. the inverse DFT.
                arma::cx_vec delay = arma::ifft(row);
                const arma::vec powers = arma::square(arma::abs(delay));
                const double threshold = weak_quartile_median(powers) * margin;

                bool changed = false;
                for (std::size_t n = 0; n < delay.n_elem; ++n)
                {
                    if (powers(n) < threshold)
                    {
                        delay(n) = cxd(0.0, 0.0);
                        changed = true;
                    }
                }
                if (!changed)
                    continue; // exact pass-through keeps the operation idempotent

                arma::cx_vec restored = arma::fft(delay);
                for (std::size_t q = 0; q < t.grid.n_freq; ++q)
                    out.at(m, q, k, l) = restored(q);
            }
        }
    }
    return out;
}

normalization_result normalize_copolarized(const channel_tensor &t,
                                           std::size_t region_time,
                                           std::size_t region_freq)
{
    if (region_time < 1 || region_freq < 1)
        throw config_error("normalize_copolarized: region sizes must be >= 1");

    std::size_t n_co = 0;
    for (std::size_t k = 0; k < t.n_rx; ++k)
        for (std::size_t l = 0; l < t.n_tx; ++l)
            if (t.pol_rx[k] == t.pol_tx[l])
                ++n_co;
    if (n_co == 0)
        throw config_error("normalize_copolarized: no co-polarized sub-link");

    normalization_result res;
    res.tensor = t;

    const std::size_t blocks_t = (t.grid.n_time + region_time - 1) / region_time;
    const std::size_t blocks_f = (t.grid.n_freq + region_freq - 1) / region_freq;

    for (std::size_t bt = 0; bt < blocks_t; ++bt)
    {
        const std::size_t m0 = bt * region_time;
        const std::size_t m1 = std::min(m0 + region_time, t.grid.n_time);
        for (std::size_t bf = 0; bf < blocks_f; ++bf)
        {
            const std::size_t q0 = bf * region_freq;
            const std::size_t q1 = std::min(q0 + region_freq, t.grid.n_freq);

            double co_power = 0.0;
            for (std::size_t m = m0; m < m1; ++m)
                for (std::size_t q = q0; q < q1; ++q)
                    for (std::size_t k = 0; k < t.n_rx; ++k)
                        for (std::size_t l = 0; l < t.n_tx; ++l)
                            if (t.pol_rx[k] == t.pol_tx[l])
                                co_power += std::norm(t.at(m, q, k, l));
            const double mean_co = co_power / static_cast<double>((m1 - m0) * (q1 - q0));

            if (mean_co <= 0.0)
            {
                res.degenerate_blocks.emplace_back(bt, bf);
                continue;
            }
            const double scale = std::sqrt(static_cast<double>(n_co) / mean_co);
            for (std::size_t m = m0; m < m1; ++m)
                for (std::size_t q = q0; q < q1; ++q)
                    for (std::size_t k = 0; k < t.n_rx; ++k)
                        for (std::size_t l = 0; l < t.n_tx; ++l)
                            res.tensor.at(m, q, k, l) *= scale;
        }
    }
    return res;
}

channel_tensor apply_phase_offsets(const channel_tensor &t, const phase_offsets &p)
{
    if (p.tx_phases.size() != t.n_tx || p.rx_phases.size() != t.n_rx)
        throw config_error("apply_phase_offsets: phase vector length mismatch");
    for (double v : p.tx_phases)
        if (!std::isfinite(v))
            throw config_error("apply_phase_offsets: non-finite tx phase");
    for (double v : p.rx_phases)
        if (!std::isfinite(v))
            throw config_error("apply_phase_offsets: non-finite rx phase");

    std::vector<cxd> rx_rot(t.n_rx), tx_rot(t.n_tx);
    for (std::size_t k = 0; k < t.n_rx; ++k)
        rx_rot[k] = std::polar(1.0, -p.rx_phases[k]);
    for (std::size_t l = 0; l < t.n_tx; ++l)
        tx_rot[l] = std::polar(1.0, -p.tx_phases[l]);

    channel_tensor out = t;
    for (std::size_t m = 0; m < t.grid.n_time; ++m)
        for (std::size_t q = 0; q < t.grid.n_freq; ++q)
            for (std::size_t k = 0; k < t.n_rx; ++k)
                for (std::size_t l = 0; l < t.n_tx; ++l)
                    out.at(m, q, k, l) = rx_rot[k] * t.at(m, q, k, l) * tx_rot[l];
    return out;
}

channel_tensor select_subarray(const channel_tensor &t, const subarray_selection &s)
{
    if (s.rx_indices.empty() || s.tx_indices.empty())
        throw config_error("select_subarray: empty selection");
    std::set<std::size_t> rx_seen, tx_seen;
    for (std::size_t k : s.rx_indices)
    {
        if (k >= t.n_rx)
            throw config_error("select_subarray: rx index out of range");
        if (!rx_seen.insert(k).second)
            throw config_error("select_subarray: duplicate rx index");
    }
    for (std::size_t l : s.tx_indices)
    {
        if (l >= t.n_tx)
            throw config_error("select_subarray: tx index out of range");
        if (!tx_seen.insert(l).second)
            throw config_error("select_subarray: duplicate tx index");
    }

    channel_tensor out;
    out.grid = t.grid;
    out.n_rx = s.rx_indices.size();
    out.n_tx = s.tx_indices.size();
    for (std::size_t k : s.rx_indices)
        out.pol_rx.push_back(t.pol_rx[k]);
    for (std::size_t l : s.tx_indices)
        out.pol_tx.push_back(t.pol_tx[l]);
    out.samples.resize(out.sample_count());
    for (std::size_t m = 0; m < t.grid.n_time; ++m)
        for (std::size_t q = 0; q < t.grid.n_freq; ++q)
            for (std::size_t k = 0; k < out.n_rx; ++k)
                for (std::size_t l = 0; l < out.n_tx; ++l)
                    out.at(m, q, k, l) = t.at(m, q, s.rx_indices[k], s.tx_indices[l]);
    return out;
}

} // namespace chanlqs
