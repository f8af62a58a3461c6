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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "chanlqs/container.hpp"
#include "chanlqs/errors.hpp"
#include "test_helpers.hpp"

using namespace chanlqs;
namespace fs = std::filesystem;

namespace
{

std::string temp_file(const char *tag)
{
    return (fs::temp_directory_path() / (std::string("chanlqs_test_") + tag + ".ctf1")).string();
}

std::string read_all(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_all(const std::string &path, const std::string &data)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

} // namespace

TEST_CASE("CTF1 minimal container round trip")
{
    channel_tensor t = test_helpers::make_tensor(1, 1, 1, 1);
    t.samples[0] = cxd(1.0, 0.0);
    const std::string path = temp_file("minimal");
    write_container(t, path);
    const channel_tensor back = read_container(path);
    CHECK(back.grid.n_time == 1);
    CHECK(back.grid.n_freq == 1);
    CHECK(back.n_rx == 1);
    CHECK(back.n_tx == 1);
    CHECK(back.samples[0] == cxd(1.0, 0.0));
    CHECK(back.grid.time_spacing == t.grid.time_spacing);
    CHECK(back.pol_rx[0] == polarization::V);
    fs::remove(path);
}

TEST_CASE("CTF1 write(read(f)) is byte-identical")
{
    channel_tensor t = test_helpers::random_tensor(5, 6, 2, 3, 123);
    t.pol_rx = {polarization::V, polarization::H};
    t.pol_tx = {polarization::V, polarization::H, polarization::V};
    t.grid.speed_per_sample = {0.0, 1.5, 2.25, 3.5, 2.7778};
    const std::string p1 = temp_file("rt1");
    const std::string p2 = temp_file("rt2");
    write_container(t, p1);
    write_container(read_container(p1), p2);
    CHECK(read_all(p1) == read_all(p2));
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("CTF1 payload shorter than declared dimensions")
{
    channel_tensor t = test_helpers::random_tensor(2, 128, 1, 1);
    const std::string path = temp_file("short");
    write_container(t, path);
    std::string data = read_all(path);
    data.resize(data.size() - 8); // drop one frequency row worth of one sample
    write_all(path, data);
    CHECK_THROWS_AS(read_container(path), format_error);
    fs::remove(path);
}

TEST_CASE("CTF1 trailing bytes rejected")
{
    channel_tensor t = test_helpers::random_tensor(2, 2, 1, 1);
    const std::string path = temp_file("trailing");
    write_container(t, path);
    std::string data = read_all(path);
    data += "xx";
    write_all(path, data);
    CHECK_THROWS_AS(read_container(path), format_error);
    fs::remove(path);
}

TEST_CASE("CTF1 malformed headers")
{
    const std::string path = temp_file("badheader");

    write_all(path, "not json\n");
    CHECK_THROWS_AS(read_container(path), format_error);

    write_all(path, R"({"magic":"NOPE"})" "\n");
    CHECK_THROWS_AS(read_container(path), format_error);

    // missing speed list
    write_all(path,
              R"({"magic":"CTF1","n_time":1,"n_freq":1,"n_rx":1,"n_tx":1,)"
              R"("T_m":0.001,"F_m":1000.0,"f_c":2.53e9,"pol_rx":["V"],"pol_tx":["V"]})"
              "\n\0\0\0\0\0\0\0\0");
    CHECK_THROWS_AS(read_container(path), format_error);
    fs::remove(path);
}

TEST_CASE("CTF1 non-finite samples rejected")
{
    channel_tensor t = test_helpers::make_tensor(1, 1, 1, 1);
    const std::string path = temp_file("nan");
    write_container(t, path);
    std::string data = read_all(path);
    // overwrite the real part with a quiet NaN (little endian 0x7fc00000)
    data[data.size() - 8] = '\x00';
    data[data.size() - 7] = '\x00';
    data[data.size() - 6] = '\xc0';
    data[data.size() - 5] = '\x7f';
    write_all(path, data);
    CHECK_THROWS_AS(read_container(path), data_error);
    fs::remove(path);
}
