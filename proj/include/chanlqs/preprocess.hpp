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
#include <utility>
#include <vector>

#include "chanlqs/types.hpp"

namespace chanlqs
{

/// Per time index and (rx,tx) sub-link, transforms the frequency row to the
/// delay domain, estimates a noise level as the median of the weakest quartile
/// of delay-power bins, zeroes every delay bin below level * 10^(margin_db/10)
/// and transforms back. Rows where no bin falls below the threshold are passed
/// through unchanged, which makes the operation idempotent once a row has been
/// floored. Throws insufficient_data for n_freq < 4.
channel_tensor apply_noise_floor(const channel_tensor &t, double margin_db);

struct normalization_result
{
    channel_tensor tensor;
    // (time block, frequency block) indices left unscaled because their
    // co-polarized power was zero.
    std::vector<std::pair<std::size_t, std::size_t>> degenerate_blocks;
};

/// Scales each time-frequency block (tiled from index 0 with a final partial
/// block) by one scalar so that the block average of sum_{co-pol}|h|^2 equals
/// the number of co-polarized sub-links. Cross-polarized entries share the
/// same scalar. Throws config_error when no co-polarized sub-link exists.
normalization_result normalize_copolarized(const channel_tensor &t,
                                           std::size_t region_time,
                                           std::size_t region_freq);

/// h[m,q,k,l] -> exp(-j rx_phase[k]) * h[m,q,k,l] * exp(-j tx_phase[l]).
channel_tensor apply_phase_offsets(const channel_tensor &t, const phase_offsets &p);

/// Restricts the tensor to the chosen rx/tx indices, carrying the
/// polarization labels along. Throws config_error on invalid selections.
channel_tensor select_subarray(const channel_tensor &t, const subarray_selection &s);

} // namespace chanlqs
