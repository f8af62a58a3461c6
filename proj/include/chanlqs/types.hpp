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

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace chanlqs
{

using cxd = std::complex<double>;

/// Antenna polarization label.
enum class polarization : char
{
    V = 'V',
    H = 'H'
};

polarization polarization_from_char(char c);
char polarization_to_char(polarization p);

/// Uniform time-frequency sampling raster of a channel recording, plus the
/// terminal speed per time sample used to map durations to distances.
struct sampling_grid
{
    double time_spacing = 0.0; // T_m [s]
    double freq_spacing = 0.0; // F_m [Hz]
    double carrier_freq = 0.0; // f_c [Hz]
    std::size_t n_time = 0;
    std::size_t n_freq = 0;
    std::vector<double> speed_per_sample; // [m/s], length n_time

    /// Arithmetic mean of speed_per_sample.
    double mean_speed() const;
    double max_speed() const;

    /// Throws config_error on violated invariants.
    void validate() const;
};

/// Complex channel transfer samples indexed [time][frequency][rx][tx].
struct channel_tensor
{
    sampling_grid grid;
    std::size_t n_rx = 0;
    std::size_t n_tx = 0;
    std::vector<polarization> pol_rx;
    std::vector<polarization> pol_tx;
    std::vector<cxd> samples; // time-major, then frequency, rx, tx

    std::size_t index(std::size_t m, std::size_t q, std::size_t k, std::size_t l) const
    {
        return ((m * grid.n_freq + q) * n_rx + k) * n_tx + l;
    }

    cxd &at(std::size_t m, std::size_t q, std::size_t k, std::size_t l)
    {
        return samples[index(m, q, k, l)];
    }
    const cxd &at(std::size_t m, std::size_t q, std::size_t k, std::size_t l) const
    {
        return samples[index(m, q, k, l)];
    }

    std::size_t sample_count() const
    {
        return grid.n_time * grid.n_freq * n_rx * n_tx;
    }

    /// Throws config_error on shape violations, data_error on non-finite samples.
    void validate() const;
};

/// A named choice of RX/TX antenna indices defining a MIMO sub-setup.
struct subarray_selection
{
    std::vector<std::size_t> rx_indices;
    std::vector<std::size_t> tx_indices;
    std::string name;
};

/// Per-antenna constant phase offsets (feeder lines, multiplexer paths).
struct phase_offsets
{
    std::vector<double> tx_phases; // [rad], length n_tx
    std::vector<double> rx_phases; // [rad], length n_rx
};

} // namespace chanlqs
