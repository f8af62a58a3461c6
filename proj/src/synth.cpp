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

#include "chanlqs/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "chanlqs/errors.hpp"

namespace chanlqs
{

namespace
{

// Engine-independent uniform in [0,1) so that generated tensors are
// bit-identical for a given seed regardless of the standard library.
double next_uniform(std::mt19937_64 &eng)
{
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    // splitmix64 step
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

void validate_inputs(const std::vector<scatterer_cluster> &clusters,
                     const steering_model &steering, const sampling_grid &grid)
{
    grid.validate();
    if (steering.tx_positions.empty() || steering.rx_positions.empty())
        throw config_error("generate: steering model needs at least one element per side");
    if (steering.pol_tx.size() != steering.tx_positions.size() ||
        steering.pol_rx.size() != steering.rx_positions.size())
        throw config_error("generate: polarization label count mismatch");
    if (steering.tx_angle_rad.size() != clusters.size() ||
        steering.rx_angle_rad.size() != clusters.size())
        throw config_error("generate: need one departure and arrival azimuth per cluster");

    const double nyquist = 0.5 / grid.time_spacing;
    const double delay_span = 1.0 / grid.freq_spacing;
    for (const scatterer_cluster &c : clusters)
    {
        if (!(c.power >= 0.0))
            throw config_error("generate: cluster power must be >= 0");
        if (!(std::abs(c.doppler_hz) < nyquist))
            throw config_error("generate: cluster Doppler violates the Nyquist bound");
        if (!(c.delay_s >= 0.0) || !(c.delay_s < delay_span))
            throw config_error("generate: cluster delay outside [0, 1/F_m)");
        if (c.birth_time > c.death_time || c.death_time > grid.n_time)
            throw config_error("generate: cluster lifetime outside the track");
        if (c.n_subpaths < 1)
            throw config_error("generate: cluster needs at least one sub-path");
        for (const auto &row : c.pol_gain)
            for (double gain : row)
                if (!(gain >= 0.0))
                    throw config_error("generate: pol_gain entries must be >= 0");
    }
}

double ramp_envelope(const scatterer_cluster &c, std::size_t m)
{
    if (c.ramp_samples == 0)
        return 1.0;
    const double r = static_cast<double>(c.ramp_samples);
    const double up = (static_cast<double>(m - c.birth_time) + 1.0) / r;
    const double down = static_cast<double>(c.death_time - m) / r;
    return std::min(1.0, std::min(up, down));
}

} // namespace

channel_tensor generate(const std::vector<scatterer_cluster> &clusters,
                        const steering_model &steering, const sampling_grid &grid,
                        std::uint64_t seed)
{
    validate_inputs(clusters, steering, grid);

    channel_tensor t;
    t.grid = grid;
    t.n_rx = steering.rx_positions.size();
    t.n_tx = steering.tx_positions.size();
    t.pol_rx = steering.pol_rx;
    t.pol_tx = steering.pol_tx;
    t.samples.assign(t.sample_count(), cxd(0.0, 0.0));

    const double two_pi = 2.0 * std::numbers::pi;

    for (std::size_t ci = 0; ci < clusters.size(); ++ci)
    {
        const scatterer_cluster &c = clusters[ci];
        if (c.birth_time == c.death_time || c.power == 0.0)
            continue;

        std::mt19937_64 eng(mix_seed(seed, ci));

        // Draw order is part of the format: 4 polarization phases (VV, VH,
        // HV, HH), then sub-path phases, then sub-path Doppler offsets.
        cxd pol_phase[2][2];
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s)
                pol_phase[r][s] = std::polar(1.0, two_pi * next_uniform(eng));
        std::vector<double> psi(c.n_subpaths), delta(c.n_subpaths);
        for (std::size_t i = 0; i < c.n_subpaths; ++i)
            psi[i] = two_pi * next_uniform(eng);
        for (std::size_t i = 0; i < c.n_subpaths; ++i)
            delta[i] = c.doppler_spread_hz * (next_uniform(eng) - 0.5);

        // Unit-power sub-path sum over the alive window.
        const std::size_t alive = c.death_time - c.birth_time;
        arma::cx_vec sub(alive);
        const double amp = 1.0 / std::sqrt(static_cast<double>(c.n_subpaths));
        for (std::size_t mi = 0; mi < alive; ++mi)
        {
            const double tm = static_cast<double>(c.birth_time + mi) * grid.time_spacing;
            cxd acc(0.0, 0.0);
            for (std::size_t i = 0; i < c.n_subpaths; ++i)
                acc += std::polar(amp, psi[i] + two_pi * delta[i] * tm);
            sub(mi) = acc;
        }
        const double rms = arma::norm(sub) / std::sqrt(static_cast<double>(alive));
        if (rms > 1e-9)
            sub /= rms;
        else
            sub.fill(cxd(1.0, 0.0));

        arma::cx_vec a_tx(t.n_tx), a_rx(t.n_rx);
        const double cos_tx = std::cos(steering.tx_angle_rad[ci]);
        const double sin_tx = std::sin(steering.tx_angle_rad[ci]);
        for (std::size_t l = 0; l < t.n_tx; ++l)
            a_tx(l) = std::polar(1.0, two_pi * (steering.tx_positions[l][0] * cos_tx +
                                                steering.tx_positions[l][1] * sin_tx));
        const double cos_rx = std::cos(steering.rx_angle_rad[ci]);
        const double sin_rx = std::sin(steering.rx_angle_rad[ci]);
        for (std::size_t k = 0; k < t.n_rx; ++k)
            a_rx(k) = std::polar(1.0, two_pi * (steering.rx_positions[k][0] * cos_rx +
                                                steering.rx_positions[k][1] * sin_rx));

        arma::cx_mat space(t.n_rx, t.n_tx);
        for (std::size_t k = 0; k < t.n_rx; ++k)
            for (std::size_t l = 0; l < t.n_tx; ++l)
            {
                const int pr = (t.pol_rx[k] == polarization::V) ? 0 : 1;
                const int pt = (t.pol_tx[l] == polarization::V) ? 0 : 1;
                space(k, l) = std::sqrt(c.pol_gain[pr][pt]) * pol_phase[pr][pt] * a_rx(k) * a_tx(l);
            }

        arma::cx_vec freq_factor(grid.n_freq);
        for (std::size_t q = 0; q < grid.n_freq; ++q)
            freq_factor(q) = std::polar(1.0, -two_pi * c.delay_s * static_cast<double>(q) *
                                                 grid.freq_spacing);

        const double sqrt_power = std::sqrt(c.power);
        for (std::size_t m = c.birth_time; m < c.death_time; ++m)
        {
            const double tm = static_cast<double>(m) * grid.time_spacing;
            const cxd time_factor = sqrt_power * ramp_envelope(c, m) * sub(m - c.birth_time) *
                                    std::polar(1.0, two_pi * c.doppler_hz * tm);
            for (std::size_t q = 0; q < grid.n_freq; ++q)
            {
                const cxd tf = time_factor * freq_factor(q);
                for (std::size_t k = 0; k < t.n_rx; ++k)
                    for (std::size_t l = 0; l < t.n_tx; ++l)
                        t.at(m, q, k, l) += tf * space(k, l);
            }
        }
    }
    return t;
}

std::pair<arma::vec, arma::vec>
ground_truth_psd(const std::vector<scatterer_cluster> &clusters, const sampling_grid &grid,
                 std::size_t m, std::size_t b_p, std::size_t b_n)
{
    grid.validate();
    if (m >= grid.n_time)
        throw config_error("ground_truth_psd: time index outside the grid");
    if (b_p % 2 == 0 || b_p < 1 || b_n < 1)
        throw config_error("ground_truth_psd: b_p must be odd and bin counts >= 1");

    arma::vec doppler(b_p, arma::fill::zeros);
    arma::vec delay(b_n, arma::fill::zeros);
    const long long half = static_cast<long long>((b_p - 1) / 2);
    for (const scatterer_cluster &c : clusters)
    {
        if (m < c.birth_time || m >= c.death_time)
            continue;
        const double env = ramp_envelope(c, m);
        const double mass = c.power * env * env;
        long long p = std::llround(c.doppler_hz * grid.time_spacing * static_cast<double>(b_p));
        p = std::max(-half, std::min(half, p));
        long long n = std::llround(c.delay_s * grid.freq_spacing * static_cast<double>(b_n));
        n = std::max<long long>(0, std::min<long long>(static_cast<long long>(b_n) - 1, n));
        doppler(static_cast<arma::uword>(p + half)) += mass;
        delay(static_cast<arma::uword>(n)) += mass;
    }
    return {doppler, delay};
}

} // namespace chanlqs
