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

#include "chanlqs/types.hpp"

#include <cmath>

#include "chanlqs/errors.hpp"

namespace chanlqs
{

polarization polarization_from_char(char c)
{
    if (c == 'V' || c == 'v')
        return polarization::V;
    if (c == 'H' || c == 'h')
        return polarization::H;
    throw config_error("polarization label must be 'V' or 'H'");
}

char polarization_to_char(polarization p)
{
    return static_cast<char>(p);
}

double sampling_grid::mean_speed() const
{
    if (speed_per_sample.empty())
        return 0.0;
    double acc = 0.0;
    for (double v : speed_per_sample)
        acc += v;
    return acc / static_cast<double>(speed_per_sample.size());
}

double sampling_grid::max_speed() const
{
    double vmax = 0.0;
    for (double v : speed_per_sample)
        vmax = std::max(vmax, v);
    return vmax;
}

void sampling_grid::validate() const
{
    if (!(time_spacing > 0.0) || !std::isfinite(time_spacing))
        throw config_error("sampling grid: time_spacing must be > 0");
    if (!(freq_spacing > 0.0) || !std::isfinite(freq_spacing))
        throw config_error("sampling grid: freq_spacing must be > 0");
    if (!(carrier_freq > 0.0) || !std::isfinite(carrier_freq))
        throw config_error("sampling grid: carrier_freq must be > 0");
    if (n_time < 1 || n_freq < 1)
        throw config_error("sampling grid: n_time and n_freq must be >= 1");
    if (speed_per_sample.size() != n_time)
        throw config_error("sampling grid: speed_per_sample must have n_time entries");
    for (double v : speed_per_sample)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw config_error("sampling grid: speeds must be finite and >= 0");
}

void channel_tensor::validate() const
{
    grid.validate();
    if (n_rx < 1 || n_tx < 1)
        throw config_error("channel tensor: n_rx and n_tx must be >= 1");
    if (pol_rx.size() != n_rx || pol_tx.size() != n_tx)
        throw config_error("channel tensor: polarization label count mismatch");
    if (samples.size() != sample_count())
        throw config_error("channel tensor: sample count mismatch");
    for (const cxd &s : samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw data_error("channel tensor: non-finite sample");
}

} // namespace chanlqs
