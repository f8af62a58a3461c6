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

#include <armadillo>

#include "chanlqs/dpss.hpp"
#include "chanlqs/errors.hpp"

using namespace chanlqs;

namespace
{

// Dense concentration kernel K[m,n] = sin(2 pi W (m-n)) / (pi (m-n)); the
// Slepian sequences are its eigenvectors, eigenvalues are the in-band energy
// concentrations. Independent oracle for the tridiagonal route.
arma::mat sinc_kernel(std::size_t n, double w)
{
    arma::mat k(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
        {
            if (i == j)
                k(i, j) = 2.0 * w;
            else
            {
                const double d = static_cast<double>(i) - static_cast<double>(j);
                k(i, j) = std::sin(2.0 * std::numbers::pi * w * d) / (std::numbers::pi * d);
            }
        }
    return k;
}

} // namespace

TEST_CASE("dpss: concentration and agreement with the sinc-kernel oracle")
{
    const std::size_t n = 32;
    const double nw = 2.0;
    const arma::mat seq = slepian_sequences(n, nw, 2);
    const arma::mat kernel = sinc_kernel(n, nw / static_cast<double>(n));

    arma::vec oracle_vals;
    arma::mat oracle_vecs;
    REQUIRE(arma::eig_sym(oracle_vals, oracle_vecs, kernel));

    for (std::size_t s = 0; s < 2; ++s)
    {
        const arma::vec u = seq.col(s);
        // concentration as the quadratic form with the kernel
        const double lambda = arma::dot(u, kernel * u);
        CHECK(lambda > 0.99);
        const arma::vec v = oracle_vecs.col(n - 1 - s);
        CHECK(std::abs(arma::dot(u, v)) > 1.0 - 1e-8);
    }
}

TEST_CASE("dpss: unit energy, orthogonality, sign convention")
{
    const dpss_bank bank = make_dpss_bank(32, 24, 2.0, 3, 2);
    REQUIRE(bank.time_windows.n_cols == 3);
    REQUIRE(bank.freq_windows.n_cols == 2);
    for (arma::uword a = 0; a < bank.time_windows.n_cols; ++a)
    {
        CHECK(std::abs(arma::norm(bank.time_windows.col(a)) - 1.0) < 1e-12);
        const arma::vec u = bank.time_windows.col(a);
        CHECK(u(arma::index_max(arma::abs(u))) > 0.0);
        for (arma::uword b = a + 1; b < bank.time_windows.n_cols; ++b)
            CHECK(std::abs(arma::dot(u, bank.time_windows.col(b))) < 1e-10);
    }
    for (arma::uword a = 0; a < bank.freq_windows.n_cols; ++a)
    {
        CHECK(std::abs(arma::norm(bank.freq_windows.col(a)) - 1.0) < 1e-12);
        for (arma::uword b = a + 1; b < bank.freq_windows.n_cols; ++b)
            CHECK(std::abs(arma::dot(bank.freq_windows.col(a), bank.freq_windows.col(b))) <
                  1e-10);
    }
}

TEST_CASE("dpss: single-window bank has weight 1")
{
    const dpss_bank bank = make_dpss_bank(16, 16, 1.0, 1, 1);
    REQUIRE(bank.weights.size() == 1);
    CHECK(bank.weights[0] == 1.0);
}

TEST_CASE("dpss: parameter bounds")
{
    CHECK_THROWS_AS(make_dpss_bank(32, 32, 2.0, 4, 2), config_error); // 4 > 2*nw-1
    CHECK_THROWS_AS(make_dpss_bank(3, 32, 2.0, 2, 2), config_error);  // length < 4
    CHECK_THROWS_AS(make_dpss_bank(32, 32, 2.0, 0, 2), config_error);
    CHECK_NOTHROW(make_dpss_bank(32, 32, 2.0, 3, 3)); // exactly 2*nw-1
}
