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

#include <armadillo>

#include "chanlqs/dpss.hpp"
#include "chanlqs/types.hpp"

namespace chanlqs
{

/// Multitaper estimate of the time- and frequency-dependent delay-Doppler
/// power density of one sub-link, evaluated on a stride grid of (time,
/// frequency) positions where the full window support fits.
struct glsf_estimate
{
    std::vector<std::size_t> time_pos; // absolute time sample indices (window centers)
    std::vector<std::size_t> freq_pos; // absolute frequency sample indices
    std::size_t b_p = 0;               // Doppler bins, odd, p in [-(b_p-1)/2, (b_p-1)/2]
    std::size_t b_n = 0;               // delay bins, n in [0, b_n-1]
    double rate_doppler = 0.0;         // B_nu = 1/T_m [Hz]
    double rate_delay = 0.0;           // B_tau = 1/F_m [s^-1]
    double doppler_step = 0.0;         // Doppler bin spacing B_nu/b_p [Hz]
    double delay_step = 0.0;           // delay bin spacing B_tau/b_n [s]

    // values[it * freq_pos.size() + iq] is a b_p x b_n non-negative matrix,
    // row index ip maps to Doppler bin p = ip - (b_p-1)/2.
    std::vector<arma::mat> values;

    const arma::mat &at(std::size_t it, std::size_t iq) const
    {
        return values[it * freq_pos.size() + iq];
    }

    // time/frequency correlation spans realized by the zero-padded DFTs
    double b_delta_t() const
    {
        return 1.0 / doppler_step;
    }
    double b_delta_f() const
    {
        return 1.0 / delay_step;
    }
};

/// Marginal power densities per (time, frequency) position along one axis.
struct psd_track
{
    std::vector<std::size_t> time_pos;
    std::vector<std::size_t> freq_pos;
    std::vector<std::vector<arma::vec>> values; // [time][freq], one PSD vector each
    double bin_step = 0.0; // spacing of the remaining axis (Hz or s)
    double rate = 0.0;     // sample rate of the dual axis, the B in the MSE model
};

/// Multitaper GLSF estimator for sub-link (k,l): weighted sum of squared,
/// sqrt(T_m*F_m)-scaled windowed DFTs of the transfer samples over the window
/// support centered at each output position. Edge positions where the support
/// leaves the tensor are omitted.
glsf_estimate estimate_glsf(const channel_tensor &t, std::size_t k, std::size_t l,
                            const dpss_bank &bank, std::size_t b_p, std::size_t b_n,
                            std::size_t stride_t, std::size_t stride_f);

/// Doppler PSD per position: sum over delay bins times the delay bin spacing.
psd_track marginal_doppler(const glsf_estimate &g);

/// Delay PSD per position: sum over Doppler bins times the Doppler bin spacing.
psd_track marginal_delay(const glsf_estimate &g);

/// Dumps one (time, frequency) slice as CSV rows "p,n,value".
void dump_glsf_slice_csv(const glsf_estimate &g, std::size_t it, std::size_t iq,
                         const std::string &path);

} // namespace chanlqs
