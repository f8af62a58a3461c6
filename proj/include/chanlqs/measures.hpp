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

#include "chanlqs/types.hpp"

namespace chanlqs
{

enum class corr_side
{
    tx,
    rx,
    full
};

/// Sequence of Hermitian PSD correlation matrix estimates over time bins,
/// each averaged over N_t time and N_f frequency samples.
struct corr_matrix_track
{
    std::vector<arma::cx_mat> matrices;
    corr_side side = corr_side::tx;
    std::size_t avg_time = 0; // N_t
    std::size_t avg_freq = 0; // N_f
};

/// Pilot-based estimator model: linear SNR gamma = sigma_p^2/sigma_n^2, pilot
/// spacing L and estimation interval length N.
struct estimator_config
{
    double gamma = 10.0;
    std::size_t pilot_spacing = 1;
    std::size_t interval_length = 30;

    void validate() const;
};

/// All pairwise measures are stored stationarity-oriented: 1 = stationary.
enum class measure_kind
{
    col_doppler,
    col_delay,
    cmd_tx,
    cmd_rx,
    cmd_full,
    snr_tx,
    snr_rx,
    mse_doppler_exact,
    mse_doppler_ap,
    mse_delay_exact,
    mse_delay_ap
};

const char *measure_kind_name(measure_kind kind);
measure_kind measure_kind_from_name(const std::string &name);

struct measure_pair
{
    double value = 0.0; // in [0, 1]
    long long m = 0;    // time-bin index
    long long m_prime = 0;
    measure_kind kind = measure_kind::col_doppler;
};

/// Correlation matrix track by time-frequency averaging: per time bin of N_t
/// samples, averaged with the first N_f frequency samples, Hermitian
/// symmetrized. TX uses H^T H*, RX uses H H^H, FULL uses vec(H) vec(H)^H.
corr_matrix_track estimate_corr_track(const channel_tensor &t, corr_side side,
                                      std::size_t n_t, std::size_t n_f);

/// Collinearity of two sampled PSDs: sum a*b / (||a|| ||b||), in [0, 1].
double collinearity_psd(const arma::vec &a, const arma::vec &b);

/// Collinearity of two Hermitian PSD matrices, tr(Ra Rb)/(||Ra||_F ||Rb||_F).
/// The correlation matrix distance is 1 minus this value.
double cmd(const arma::cx_mat &r_a, const arma::cx_mat &r_b);

/// Beamforming SNR ratio u^H Ra u / lambda_max(Ra) with u the dominant unit
/// eigenvector of the stale statistic Rb. Eigenvalue ties are broken by a
/// deterministic ordering (descending eigenvalue, then lexicographic on
/// phase-normalized components rounded to 12 decimals).
double relative_snr(const arma::cx_mat &r_a, const arma::cx_mat &r_b_stale);

/// Matched-to-mismatched ratio of the closed-form infinite-length estimator
/// MSE evaluated bin-by-bin on the two PSDs; `rate` is the sample rate of the
/// dual axis (1/T_m for Doppler PSDs, 1/F_m for delay PSDs).
double approx_relative_mse(const arma::vec &psd_true, const arma::vec &psd_stale,
                           const estimator_config &cfg, double rate);

/// Per-PSD quantities of the finite-length LMMSE interpolation model: the
/// Toeplitz pilot covariance (plus noise), the cross covariance to the
/// interval midpoint, and the filter solved from these statistics. Build one
/// per track position when evaluating many (m, m') pairs.
struct mse_model
{
    arma::cx_mat cov_plus_noise; // N x N pilot observation covariance
    arma::cx_vec cross;          // pilot-to-midpoint covariance
    arma::cx_vec filter;         // LMMSE weights from this model's statistics
    double variance = 0.0;       // r[0]
    double matched_mse = 0.0;    // MSE of `filter` under this model
};

mse_model make_mse_model(const arma::vec &psd, const estimator_config &cfg, double rate);

/// MSE of the stale model's filter evaluated under the true statistics.
double mismatched_mse(const mse_model &truth, const mse_model &stale);

/// Matched-to-mismatched MSE ratio of the finite-length LMMSE interpolation
/// filter built from the stale PSD and evaluated under the true PSD. The
/// filter estimates the sample at the interval midpoint from N pilots spaced
/// L apart; covariances are synthesized from the binned PSDs.
double exact_relative_mse(const arma::vec &psd_true, const arma::vec &psd_stale,
                          const estimator_config &cfg, double rate);

struct cmd_decomposition
{
    double value = 0.0; // equals cmd(r_a, r_b)
    arma::vec terms;    // lambda_l(Rb) * u_l^H Ra u_l, descending eigenvalue order
};

/// Collinearity computed through the eigendecomposition of the stale matrix,
/// exposing the per-eigenstream received-power terms.
cmd_decomposition cmd_algorithmic_decomposition(const arma::cx_mat &r_a,
                                                const arma::cx_mat &r_b);

} // namespace chanlqs
