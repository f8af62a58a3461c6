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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <armadillo>

#include "chanlqs/errors.hpp"
#include "chanlqs/preprocess.hpp"
#include "test_helpers.hpp"

using namespace chanlqs;

namespace
{

// Frequency row whose delay transform has one tap at `tap_bin` plus
// constant-magnitude random-phase bins everywhere else.
arma::cx_vec tap_plus_noise_row(std::size_t n, std::size_t tap_bin, double tap_amp,
                                double noise_amp, unsigned seed)
{
    std::mt19937 eng(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
    arma::cx_vec delay(n, arma::fill::zeros);
    for (std::size_t i = 0; i < n; ++i)
        delay(i) = std::polar(noise_amp, unif(eng));
    delay(tap_bin) = std::polar(tap_amp, unif(eng));
    return arma::fft(delay); // inverse of the ifft used by the noise floor
}

double delay_power(const channel_tensor &t, std::size_t m, std::size_t tap_bin, bool on_tap)
{
    arma::cx_vec row(t.grid.n_freq);
    for (std::size_t q = 0; q < t.grid.n_freq; ++q)
        row(q) = t.at(m, q, 0, 0);
    const arma::vec p = arma::square(arma::abs(arma::ifft(row)));
    if (on_tap)
        return p(tap_bin);
    return arma::sum(p) - p(tap_bin);
}

} // namespace

TEST_CASE("noise floor: all-zero tensor stays zero")
{
    channel_tensor t = test_helpers::make_tensor(2, 8, 1, 1);
    const channel_tensor out = apply_noise_floor(t, 6.0);
    for (const cxd &s : out.samples)
        CHECK(s == cxd(0.0, 0.0));
}

TEST_CASE("noise floor: dominant tap kept, noise removed, idempotent")
{
    const std::size_t n_freq = 64, tap_bin = 5;
    channel_tensor t = test_helpers::make_tensor(1, n_freq, 1, 1);
    // tap power 40 dB above the per-bin noise power
    const arma::cx_vec row = tap_plus_noise_row(n_freq, tap_bin, 1.0, 1e-2, 42);
    for (std::size_t q = 0; q < n_freq; ++q)
        t.at(0, q, 0, 0) = row(q);

    const double tap_before = delay_power(t, 0, tap_bin, true);
    const double off_before = delay_power(t, 0, tap_bin, false);

    const channel_tensor out = apply_noise_floor(t, 6.0);
    const double tap_after = delay_power(out, 0, tap_bin, true);
    const double off_after = delay_power(out, 0, tap_bin, false);

    CHECK(std::abs(10.0 * std::log10(tap_after / tap_before)) < 0.1);
    CHECK(off_after <= 0.1 * off_before); // reduced by at least 10 dB

    const channel_tensor twice = apply_noise_floor(out, 6.0);
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        CHECK(twice.samples[i] == out.samples[i]);
}

TEST_CASE("noise floor: row with zero weakest quartile is a no-op")
{
    const std::size_t n_freq = 16;
    channel_tensor t = test_helpers::make_tensor(1, n_freq, 1, 1);
    // delay response: one tap, all remaining bins exactly zero
    arma::cx_vec delay(n_freq, arma::fill::zeros);
    delay(3) = cxd(2.0, 1.0);
    const arma::cx_vec row = arma::fft(delay);
    for (std::size_t q = 0; q < n_freq; ++q)
        t.at(0, q, 0, 0) = row(q);
    const channel_tensor out = apply_noise_floor(t, 6.0);
    for (std::size_t i = 0; i < t.samples.size(); ++i)
        CHECK(out.samples[i] == t.samples[i]);
}

TEST_CASE("noise floor: insufficient frequency samples")
{
    channel_tensor t = test_helpers::make_tensor(1, 3, 1, 1);
    CHECK_THROWS_AS(apply_noise_floor(t, 6.0), insufficient_data);
    channel_tensor ok = test_helpers::make_tensor(1, 4, 1, 1);
    CHECK_NOTHROW(apply_noise_floor(ok, 6.0));
    CHECK_THROWS_AS(apply_noise_floor(ok, -1.0), config_error);
}

TEST_CASE("normalization: uniform co-polarized magnitude 2 gives scalar 1/2")
{
    channel_tensor t = test_helpers::make_tensor(4, 4, 2, 2, {'V', 'H'}, {'V', 'H'});
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t q = 0; q < 4; ++q)
        {
            t.at(m, q, 0, 0) = cxd(2.0, 0.0);  // V-V co-polarized
            t.at(m, q, 1, 1) = cxd(0.0, -2.0); // H-H co-polarized
            t.at(m, q, 0, 1) = cxd(0.5, 0.5);  // cross
            t.at(m, q, 1, 0) = cxd(-0.5, 0.5);
        }
    const normalization_result res = normalize_copolarized(t, 4, 4);
    CHECK(res.degenerate_blocks.empty());
    CHECK(std::abs(res.tensor.at(0, 0, 0, 0).real() - 1.0) < 1e-12);
    CHECK(std::abs(res.tensor.at(0, 0, 0, 1).real() - 0.25) < 1e-12);

    // per block: mean of co-polarized power equals the co-polarized link count
    double co = 0.0;
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t q = 0; q < 4; ++q)
            co += std::norm(res.tensor.at(m, q, 0, 0)) + std::norm(res.tensor.at(m, q, 1, 1));
    CHECK(std::abs(co / 16.0 - 2.0) < 1e-10 * 2.0);
}

TEST_CASE("normalization: all-V tensor reaches Frobenius power n_rx*n_tx")
{
    channel_tensor t = test_helpers::random_tensor(8, 8, 2, 2, 5);
    const normalization_result res = normalize_copolarized(t, 8, 8);
    double fro = 0.0;
    for (const cxd &s : res.tensor.samples)
        fro += std::norm(s);
    fro /= 64.0; // block mean of ||H||_F^2
    CHECK(std::abs(fro - 4.0) < 1e-10 * 4.0);
}

TEST_CASE("normalization: blocks with powers P and 4P get scalars in ratio 2:1")
{
    channel_tensor t = test_helpers::make_tensor(4, 2, 1, 1);
    for (std::size_t q = 0; q < 2; ++q)
        for (std::size_t m = 0; m < 2; ++m)
        {
            t.at(m, q, 0, 0) = cxd(1.0, 0.0);     // block power P
            t.at(m + 2, q, 0, 0) = cxd(2.0, 0.0); // block power 4P
        }
    const normalization_result res = normalize_copolarized(t, 2, 2);
    const double s1 = res.tensor.at(0, 0, 0, 0).real() / 1.0;
    const double s2 = res.tensor.at(2, 0, 0, 0).real() / 2.0;
    CHECK(std::abs(s1 / s2 - 2.0) < 1e-12);
}

TEST_CASE("normalization: per-block invariant on random data with partial blocks")
{
    channel_tensor t = test_helpers::random_tensor(10, 6, 2, 2, 11);
    t.pol_rx = {polarization::V, polarization::H};
    t.pol_tx = {polarization::V, polarization::V};
    const std::size_t rt = 4, rf = 4; // tiles 10x6 with partial final blocks
    const normalization_result res = normalize_copolarized(t, rt, rf);
    std::size_t n_co = 0;
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
            if (t.pol_rx[k] == t.pol_tx[l])
                ++n_co;
    for (std::size_t bt = 0; bt * rt < 10; ++bt)
        for (std::size_t bf = 0; bf * rf < 6; ++bf)
        {
            double acc = 0.0;
            std::size_t count = 0;
            for (std::size_t m = bt * rt; m < std::min<std::size_t>((bt + 1) * rt, 10); ++m)
                for (std::size_t q = bf * rf; q < std::min<std::size_t>((bf + 1) * rf, 6); ++q)
                {
                    ++count;
                    for (std::size_t k = 0; k < 2; ++k)
                        for (std::size_t l = 0; l < 2; ++l)
                            if (t.pol_rx[k] == t.pol_tx[l])
                                acc += std::norm(res.tensor.at(m, q, k, l));
                }
            const double mean = acc / static_cast<double>(count);
            CHECK(std::abs(mean - static_cast<double>(n_co)) <
                  1e-10 * static_cast<double>(n_co));
        }
}

TEST_CASE("normalization: degenerate block flagged and N_co=0 rejected")
{
    channel_tensor t = test_helpers::make_tensor(4, 2, 1, 1);
    for (std::size_t q = 0; q < 2; ++q)
        for (std::size_t m = 2; m < 4; ++m)
            t.at(m, q, 0, 0) = cxd(1.0, 1.0);
    const normalization_result res = normalize_copolarized(t, 2, 2);
    REQUIRE(res.degenerate_blocks.size() == 1);
    CHECK(res.degenerate_blocks[0].first == 0);
    CHECK(res.tensor.at(0, 0, 0, 0) == cxd(0.0, 0.0)); // left unscaled

    channel_tensor cross = test_helpers::make_tensor(2, 2, 1, 1, {'V'}, {'H'});
    CHECK_THROWS_AS(normalize_copolarized(cross, 2, 2), config_error);
}

TEST_CASE("phase offsets: identity, sign flip, magnitude preservation, inverse")
{
    channel_tensor t = test_helpers::make_tensor(1, 1, 1, 1);
    t.samples[0] = cxd(1.0, 0.0);
    phase_offsets zero{{0.0}, {0.0}};
    CHECK(apply_phase_offsets(t, zero).samples[0] == cxd(1.0, 0.0));

    phase_offsets pi_tx{{std::numbers::pi}, {0.0}};
    const cxd flipped = apply_phase_offsets(t, pi_tx).samples[0];
    CHECK(std::abs(flipped.real() + 1.0) < 1e-15);
    CHECK(std::abs(flipped.imag()) < 1e-15);

    channel_tensor big = test_helpers::random_tensor(3, 4, 2, 3, 9);
    std::mt19937 eng(17);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    phase_offsets p;
    for (std::size_t l = 0; l < 3; ++l)
        p.tx_phases.push_back(unif(eng));
    for (std::size_t k = 0; k < 2; ++k)
        p.rx_phases.push_back(unif(eng));
    const channel_tensor rotated = apply_phase_offsets(big, p);
    for (std::size_t i = 0; i < big.samples.size(); ++i)
        CHECK(std::abs(std::abs(rotated.samples[i]) - std::abs(big.samples[i])) < 1e-12);

    phase_offsets neg;
    for (double v : p.tx_phases)
        neg.tx_phases.push_back(-v);
    for (double v : p.rx_phases)
        neg.rx_phases.push_back(-v);
    const channel_tensor back = apply_phase_offsets(rotated, neg);
    for (std::size_t i = 0; i < big.samples.size(); ++i)
        CHECK(std::abs(back.samples[i] - big.samples[i]) < 1e-12);

    phase_offsets wrong{{0.0}, {0.0}};
    CHECK_THROWS_AS(apply_phase_offsets(big, wrong), config_error);
}

TEST_CASE("subarray selection")
{
    channel_tensor t = test_helpers::random_tensor(2, 2, 2, 2, 3);
    t.pol_rx = {polarization::V, polarization::H};
    t.pol_tx = {polarization::V, polarization::H};

    subarray_selection identity{{0, 1}, {0, 1}, "all"};
    const channel_tensor same = select_subarray(t, identity);
    CHECK(same.samples == t.samples);

    subarray_selection first{{0}, {0}, "vv"};
    const channel_tensor vv = select_subarray(t, first);
    CHECK(vv.n_rx == 1);
    CHECK(vv.n_tx == 1);
    CHECK(vv.pol_rx[0] == polarization::V);
    CHECK(vv.pol_tx[0] == polarization::V);
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t q = 0; q < 2; ++q)
            CHECK(vv.at(m, q, 0, 0) == t.at(m, q, 0, 0));

    subarray_selection bad{{0, 2}, {0}, "bad"};
    CHECK_THROWS_AS(select_subarray(t, bad), config_error);
    subarray_selection dup{{0, 0}, {0}, "dup"};
    CHECK_THROWS_AS(select_subarray(t, dup), config_error);
}
