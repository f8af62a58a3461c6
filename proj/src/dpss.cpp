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

#include "chanlqs/dpss.hpp"

#include <cmath>
#include <numbers>

#include "chanlqs/errors.hpp"

namespace chanlqs
{

arma::mat slepian_sequences(std::size_t length, double nw, std::size_t count)
{
    if (length < 4)
        throw config_error("slepian_sequences: length must be >= 4");
    if (!(nw > 0.0) || !std::isfinite(nw))
        throw config_error("slepian_sequences: halfbandwidth product must be > 0");
    if (count < 1 || count > length)
        throw config_error("slepian_sequences: invalid sequence count");

    const double n = static_cast<double>(length);
    const double w = nw / n;
    const double c = std::cos(2.0 * std::numbers::pi * w);

    // Tridiagonal matrix commuting with the sinc concentration kernel; its
    // top eigenvectors are the Slepian sequences, most concentrated first.
    arma::mat tri(length, length, arma::fill::zeros);
    for (std::size_t i = 0; i < length; ++i)
    {
        const double di = (n - 1.0) / 2.0 - static_cast<double>(i);
        tri(i, i) = c * di * di;
        if (i > 0)
        {
            const double e = static_cast<double>(i) * (n - static_cast<double>(i)) / 2.0;
            tri(i, i - 1) = e;
            tri(i - 1, i) = e;
        }
    }

    arma::vec evals;
    arma::mat evecs;
    if (!arma::eig_sym(evals, evecs, tri))
        throw numerical_error("slepian_sequences: eigendecomposition failed");

    arma::mat out(length, count);
    for (std::size_t s = 0; s < count; ++s)
    {
        arma::vec u = evecs.col(length - 1 - s); // eig_sym sorts ascending
        std::size_t imax = 0;
        for (std::size_t i = 1; i < length; ++i)
            if (std::abs(u(i)) > std::abs(u(imax)))
                imax = i;
        if (u(imax) < 0.0)
            u = -u;
        out.col(s) = u / arma::norm(u);
    }
    return out;
}

dpss_bank make_dpss_bank(std::size_t n_wt, std::size_t n_wf, double nw,
                         std::size_t windows_time, std::size_t windows_freq)
{
    if (windows_time < 1 || windows_freq < 1)
        throw config_error("make_dpss_bank: window counts must be >= 1");
    const double max_windows = 2.0 * nw - 1.0;
    if (static_cast<double>(windows_time) > max_windows + 1e-12 ||
        static_cast<double>(windows_freq) > max_windows + 1e-12)
        throw config_error("make_dpss_bank: window count exceeds 2*nw-1");

    dpss_bank bank;
    bank.time_windows = slepian_sequences(n_wt, nw, windows_time);
    bank.freq_windows = slepian_sequences(n_wf, nw, windows_freq);
    bank.time_halfbandwidth = nw;
    const std::size_t s = windows_time * windows_freq;
    bank.weights.assign(s, 1.0 / static_cast<double>(s));
    return bank;
}

} // namespace chanlqs
