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

#include "chanlqs/glsf.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "chanlqs/errors.hpp"

namespace chanlqs
{

glsf_estimate estimate_glsf(const channel_tensor &t, std::size_t k, std::size_t l,
                            const dpss_bank &bank, std::size_t b_p, std::size_t b_n,
                            std::size_t stride_t, std::size_t stride_f)
{
    if (k >= t.n_rx || l >= t.n_tx)
        throw config_error("estimate_glsf: sub-link index out of range");
    if (b_p % 2 == 0 || b_p < 1 || b_n < 1)
        throw config_error("estimate_glsf: b_p must be odd and bin counts >= 1");
    if (stride_t < 1 || stride_f < 1)
        throw config_error("estimate_glsf: strides must be >= 1");

    const std::size_t n_wt = bank.time_windows.n_rows;
    const std::size_t n_wf = bank.freq_windows.n_rows;
    if (n_wt > t.grid.n_time || n_wf > t.grid.n_freq)
        throw insufficient_data("estimate_glsf: tensor smaller than one window");

    const std::size_t n_i = bank.time_windows.n_cols;
    const std::size_t n_j = bank.freq_windows.n_cols;
    const std::size_t off_t = n_wt / 2; // support m' in [-off_t, n_wt-off_t-1]
    const std::size_t off_f = n_wf / 2;

    glsf_estimate g;
    g.b_p = b_p;
    g.b_n = b_n;
    g.rate_doppler = 1.0 / t.grid.time_spacing;
    g.rate_delay = 1.0 / t.grid.freq_spacing;
    g.doppler_step = g.rate_doppler / static_cast<double>(b_p);
    g.delay_step = g.rate_delay / static_cast<double>(b_n);

    for (std::size_t m = off_t; m + (n_wt - off_t) <= t.grid.n_time; m += stride_t)
        g.time_pos.push_back(m);
    for (std::size_t q = off_f; q + (n_wf - off_f) <= t.grid.n_freq; q += stride_f)
        g.freq_pos.push_back(q);
    if (g.time_pos.empty() || g.freq_pos.empty())
        throw insufficient_data("estimate_glsf: no valid output position");

    // Separable evaluation of the windowed zero-padded DFTs as two matrix
    // products per taper pair: rows of A carry u_a together with the Doppler
    // twiddles over the centered support, columns of B carry v_b with the
    // delay twiddles (opposite sign per the transfer-function convention).
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<arma::cx_mat> a_mats(n_i, arma::cx_mat(b_p, n_wt));
    for (std::size_t a = 0; a < n_i; ++a)
        for (std::size_t ip = 0; ip < b_p; ++ip)
        {
            const double p = static_cast<double>(ip) - static_cast<double>((b_p - 1) / 2);
            for (std::size_t i = 0; i < n_wt; ++i)
            {
                const double mprime = static_cast<double>(i) - static_cast<double>(off_t);
                a_mats[a](ip, i) = bank.time_windows(i, a) *
                                   std::polar(1.0, -two_pi * p * mprime / static_cast<double>(b_p));
            }
        }
    std::vector<arma::cx_mat> b_mats(n_j, arma::cx_mat(n_wf, b_n));
    for (std::size_t b = 0; b < n_j; ++b)
        for (std::size_t j = 0; j < n_wf; ++j)
        {
            const double qprime = static_cast<double>(j) - static_cast<double>(off_f);
            for (std::size_t n = 0; n < b_n; ++n)
                b_mats[b](j, n) = bank.freq_windows(j, b) *
                                  std::polar(1.0, two_pi * static_cast<double>(n) * qprime /
                                                      static_cast<double>(b_n));
        }

    arma::cx_mat sub(t.grid.n_time, t.grid.n_freq);
    for (std::size_t m = 0; m < t.grid.n_time; ++m)
        for (std::size_t q = 0; q < t.grid.n_freq; ++q)
            sub(m, q) = t.at(m, q, k, l);

    const double tf_scale = t.grid.time_spacing * t.grid.freq_spacing;
    g.values.assign(g.time_pos.size() * g.freq_pos.size(), arma::mat());
    for (std::size_t it = 0; it < g.time_pos.size(); ++it)
    {
        for (std::size_t iq = 0; iq < g.freq_pos.size(); ++iq)
        {
            const arma::cx_mat seg = sub.submat(g.time_pos[it] - off_t, g.freq_pos[iq] - off_f,
                                                arma::size(n_wt, n_wf));
            arma::mat acc(b_p, b_n, arma::fill::zeros);
            for (std::size_t a = 0; a < n_i; ++a)
            {
                const arma::cx_mat partial = a_mats[a] * seg;
                for (std::size_t b = 0; b < n_j; ++b)
                {
                    const double gamma = bank.weights[a * n_j + b];
                    acc += (gamma * tf_scale) * arma::square(arma::abs(partial * b_mats[b]));
                }
            }
            g.values[it * g.freq_pos.size() + iq] = acc;
        }
    }
    return g;
}

psd_track marginal_doppler(const glsf_estimate &g)
{
    psd_track track;
    track.time_pos = g.time_pos;
    track.freq_pos = g.freq_pos;
    track.bin_step = g.doppler_step;
    track.rate = g.rate_doppler;
    track.values.resize(g.time_pos.size());
    for (std::size_t it = 0; it < g.time_pos.size(); ++it)
    {
        track.values[it].resize(g.freq_pos.size());
        for (std::size_t iq = 0; iq < g.freq_pos.size(); ++iq)
            track.values[it][iq] = arma::sum(g.at(it, iq), 1) * g.delay_step;
    }
    return track;
}

psd_track marginal_delay(const glsf_estimate &g)
{
    psd_track track;
    track.time_pos = g.time_pos;
    track.freq_pos = g.freq_pos;
    track.bin_step = g.delay_step;
    track.rate = g.rate_delay;
    track.values.resize(g.time_pos.size());
    for (std::size_t it = 0; it < g.time_pos.size(); ++it)
    {
        track.values[it].resize(g.freq_pos.size());
        for (std::size_t iq = 0; iq < g.freq_pos.size(); ++iq)
            track.values[it][iq] = arma::sum(g.at(it, iq), 0).t() * g.doppler_step;
    }
    return track;
}

void dump_glsf_slice_csv(const glsf_estimate &g, std::size_t it, std::size_t iq,
                         const std::string &path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw format_error("cannot open CSV file for writing: " + path);
    out << "p,n,value\n";
    const arma::mat &slice = g.at(it, iq);
    char buf[64];
    for (std::size_t ip = 0; ip < g.b_p; ++ip)
    {
        const long long p = static_cast<long long>(ip) - static_cast<long long>((g.b_p - 1) / 2);
        for (std::size_t n = 0; n < g.b_n; ++n)
        {
            std::snprintf(buf, sizeof(buf), "%lld,%zu,%.12g\n", p, n, slice(ip, n));
            out << buf;
        }
    }
}

} // namespace chanlqs
