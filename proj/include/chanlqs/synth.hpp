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

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <armadillo>

#include "chanlqs/types.hpp"

namespace chanlqs
{

/// One specular scatterer cluster with a fixed delay-Doppler position, a
/// lifetime in time samples [birth_time, death_time) and a 2x2 power coupling
/// between the V/H polarizations at RX (rows) and TX (columns).
struct scatterer_cluster
{
    double doppler_hz = 0.0;
    double delay_s = 0.0;
    double power = 1.0;
    std::array<std::array<double, 2>, 2> pol_gain = {{{1.0, 0.0}, {0.0, 1.0}}};
    std::size_t birth_time = 0;
    std::size_t death_time = 0;
    std::size_t n_subpaths = 20;
    // Intra-cluster Doppler spread of the sub-path sum; 0 keeps the cluster a
    // constant-amplitude line so its delay-Doppler position stays exact.
    double doppler_spread_hz = 0.0;
    // Linear birth/death amplitude ramp length in samples; 0 = abrupt.
    std::size_t ramp_samples = 0;
};

/// Ideal isotropic plane-wave array responses: element coordinates in
/// wavelengths plus one azimuth per cluster at each array.
struct steering_model
{
    std::vector<std::array<double, 2>> tx_positions; // (x, y) [wavelengths]
    std::vector<std::array<double, 2>> rx_positions;
    std::vector<double> tx_angle_rad; // departure azimuth per cluster
    std::vector<double> rx_angle_rad; // arrival azimuth per cluster
    std::vector<polarization> pol_tx; // per TX element
    std::vector<polarization> pol_rx; // per RX element
};

/// Deterministic synthetic channel: the superposition of all clusters alive at
/// each time sample, each contributing sqrt(power) * pol coupling * steering
/// phasors * unit-power sub-path sum * exp(j 2 pi (doppler m T_m - delay q F_m)).
/// Identical seed and inputs give a bit-identical tensor.
channel_tensor generate(const std::vector<scatterer_cluster> &clusters,
                        const steering_model &steering, const sampling_grid &grid,
                        std::uint64_t seed);

/// Exact marginal densities of the generated process at time index m: cluster
/// powers binned at their nearest Doppler/delay grid positions. Values are
/// integrated per-bin powers, not densities.
std::pair<arma::vec, arma::vec>
ground_truth_psd(const std::vector<scatterer_cluster> &clusters, const sampling_grid &grid,
                 std::size_t m, std::size_t b_p, std::size_t b_n);

} // namespace chanlqs
