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

#include "chanlqs/errors.hpp"
#include "chanlqs/lqs.hpp"

using namespace chanlqs;

namespace
{

measure_curve curve_from(const std::vector<long long> &offsets, const std::vector<double> &avg)
{
    measure_curve c;
    c.offsets = offsets;
    c.avg = avg;
    c.std_dev.assign(avg.size(), 0.0);
    c.count.assign(avg.size(), 1);
    return c;
}

std::vector<measure_pair> pairs_at(long long offset, const std::vector<double> &values)
{
    std::vector<measure_pair> out;
    long long m = 0;
    for (double v : values)
        out.push_back({v, m++, m - 1 + offset, measure_kind::col_doppler});
    return out;
}

} // namespace

TEST_CASE("average measure")
{
    SUBCASE("single pair per offset")
    {
        auto pairs = pairs_at(2, {0.75});
        const measure_curve c = average_measure(pairs, 2, 2);
        REQUIRE(c.offsets == std::vector<long long>{2});
        CHECK(c.avg[0] == doctest::Approx(0.75));
        CHECK(c.std_dev[0] == 0.0);
        CHECK(c.count[0] == 1);
    }

    SUBCASE("stationary stream averages to one with zero deviation")
    {
        std::vector<measure_pair> pairs;
        for (long long off : {-1ll, 0ll, 1ll})
            for (const measure_pair &p : pairs_at(off, {1.0, 1.0, 1.0, 1.0}))
                pairs.push_back(p);
        const measure_curve c = average_measure(pairs, -1, 1);
        REQUIRE(c.offsets.size() == 3);
        for (std::size_t i = 0; i < 3; ++i)
        {
            CHECK(c.avg[i] == 1.0);
            CHECK(c.std_dev[i] == 0.0);
            CHECK(c.count[i] == 4);
        }
    }

    SUBCASE("population standard deviation")
    {
        auto pairs = pairs_at(3, {0.8, 1.0});
        const measure_curve c = average_measure(pairs, 3, 3);
        CHECK(c.avg[0] == doctest::Approx(0.9));
        CHECK(c.std_dev[0] == doctest::Approx(0.1));
    }

    SUBCASE("empty offsets are omitted")
    {
        auto pairs = pairs_at(0, {1.0});
        const measure_curve c = average_measure(pairs, -1, 1);
        CHECK(c.offsets == std::vector<long long>{0});
    }

    SUBCASE("order independence")
    {
        auto pairs = pairs_at(1, {0.2, 0.9, 0.5, 0.7});
        auto shuffled = pairs;
        std::swap(shuffled[0], shuffled[3]);
        std::swap(shuffled[1], shuffled[2]);
        const measure_curve a = average_measure(pairs, 1, 1);
        const measure_curve b = average_measure(shuffled, 1, 1);
        CHECK(a.avg[0] == b.avg[0]);
        CHECK(a.std_dev[0] == b.std_dev[0]);
    }
}

TEST_CASE("extract LQS")
{
    SUBCASE("hand-evaluated threshold set")
    {
        const measure_curve c =
            curve_from({-2, -1, 0, 1, 2}, {0.89, 0.95, 1.0, 0.95, 0.89});
        const lqs_result res = extract_lqs(c, 0.9, 0.25, 2.0);
        CHECK(res.set_size == 3);
        CHECK(res.lqs_time == doctest::Approx(0.75));
        CHECK(res.lqs_distance == doctest::Approx(1.5));
        CHECK(!res.censored);
        CHECK(!res.degenerate);
    }

    SUBCASE("uniformly stationary curve is censored")
    {
        const measure_curve c = curve_from({-2, -1, 0, 1, 2}, {1.0, 1.0, 1.0, 1.0, 1.0});
        const lqs_result res = extract_lqs(c, 0.9, 0.25, 2.0);
        CHECK(res.set_size == 5);
        CHECK(res.censored);
    }

    SUBCASE("zero threshold spans the whole evaluated range")
    {
        const measure_curve c = curve_from({-1, 0, 1}, {0.01, 0.5, 0.01});
        const lqs_result res = extract_lqs(c, 0.0, 1.0, 1.0);
        CHECK(res.set_size == 3);
        CHECK(res.censored);
    }

    SUBCASE("degenerate threshold")
    {
        const measure_curve c = curve_from({-1, 0, 1}, {0.5, 0.85, 0.5});
        const lqs_result res = extract_lqs(c, 0.9, 1.0, 1.0);
        CHECK(res.degenerate);
        CHECK(res.set_size == 0);
        CHECK(res.lqs_time == 0.0);
    }

    SUBCASE("gaps in the evaluated offsets break connectivity")
    {
        const measure_curve c = curve_from({-3, -1, 0, 1, 3}, {1.0, 1.0, 1.0, 1.0, 1.0});
        const lqs_result res = extract_lqs(c, 0.9, 1.0, 1.0);
        CHECK(res.set_size == 3); // {-1, 0, 1}
        CHECK(!res.censored);
    }

    SUBCASE("threshold sets nest: |C| non-increasing in the threshold")
    {
        std::mt19937 eng(44);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial)
        {
            std::vector<long long> offsets;
            std::vector<double> avg;
            for (long long off = -20; off <= 20; ++off)
            {
                offsets.push_back(off);
                avg.push_back(off == 0 ? 1.0 : unif(eng));
            }
            const measure_curve c = curve_from(offsets, avg);
            std::size_t prev = 42; // larger than any possible |C|
            for (int step = 0; step < 50; ++step)
            {
                const double th = static_cast<double>(step) / 50.0;
                const lqs_result res = extract_lqs(c, th, 1.0, 1.0);
                CHECK(res.set_size <= prev);
                prev = res.set_size;
            }
        }
    }

    SUBCASE("validation")
    {
        const measure_curve c = curve_from({-1, 1}, {1.0, 1.0});
        CHECK_THROWS_AS(extract_lqs(c, 0.9, 1.0, 1.0), config_error); // no offset 0
        const measure_curve ok = curve_from({0}, {1.0});
        CHECK_THROWS_AS(extract_lqs(ok, 1.5, 1.0, 1.0), config_error);
    }
}

TEST_CASE("measure correlation")
{
    const std::vector<double> a = {0.1, 0.5, 0.9, 0.3};
    CHECK(measure_correlation(a, a) == doctest::Approx(1.0));

    std::vector<double> neg;
    const double mean = (0.1 + 0.5 + 0.9 + 0.3) / 4.0;
    for (double v : a)
        neg.push_back(2.0 * mean - v);
    CHECK(measure_correlation(a, neg) == doctest::Approx(-1.0));

    const std::vector<double> x = {0.0, 1.0, 2.0};
    const std::vector<double> y = {0.0, 2.0, 4.0};
    CHECK(measure_correlation(x, y) == doctest::Approx(1.0));

    const std::vector<double> flat = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(measure_correlation(x, flat), undefined_measure);
    CHECK_THROWS_AS(measure_correlation(x, a), config_error);
}

TEST_CASE("DU condition check reproduces the urban-macrocell numbers")
{
    const double v = 10.0 / 3.6; // 10 km/h
    const du_report rep = du_check(v, 2.53e9, 5e-6, 1.19, 15.0);

    CHECK(std::abs(rep.nu_max_hz - 23.4) / 23.4 < 0.01);
    CHECK(std::abs(rep.coherence_time_s - 42.7e-3) / 42.7e-3 < 0.01);
    CHECK(rep.coherence_freq_hz == doctest::Approx(200e3));
    CHECK(std::abs(rep.correlation_product - 1.16e-7) / 1.16e-7 < 0.01);
    CHECK(std::abs(rep.dispersion_product - 1.17e-4) / 1.17e-4 < 0.01);
    const double delta_deg = rep.angular_spread_rad * 180.0 / std::numbers::pi;
    CHECK(std::abs(delta_deg - 25.8) / 25.8 < 0.01);
    CHECK(std::abs(rep.stationarity_time_s - 0.43) / 0.43 < 0.01);
    CHECK(std::abs(rep.stationarity_freq_hz - 20e6) / 20e6 < 0.01);
    CHECK(rep.doubly_underspread);

    CHECK_THROWS_AS(du_check(0.0, 2.53e9, 5e-6, 1.19, 15.0), config_error);
}
