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

#include "chanlqs/container.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chanlqs/errors.hpp"

namespace chanlqs
{

namespace
{

using nlohmann::json;

void put_f32_le(std::vector<char> &buf, float value)
{
    std::uint32_t bits;
    std::memcpy(&bits, &value, 4);
    buf.push_back(static_cast<char>(bits & 0xffu));
    buf.push_back(static_cast<char>((bits >> 8) & 0xffu));
    buf.push_back(static_cast<char>((bits >> 16) & 0xffu));
    buf.push_back(static_cast<char>((bits >> 24) & 0xffu));
}

float get_f32_le(const char *p)
{
    std::uint32_t bits = (static_cast<std::uint32_t>(static_cast<unsigned char>(p[0]))) |
                         (static_cast<std::uint32_t>(static_cast<unsigned char>(p[1])) << 8) |
                         (static_cast<std::uint32_t>(static_cast<unsigned char>(p[2])) << 16) |
                         (static_cast<std::uint32_t>(static_cast<unsigned char>(p[3])) << 24);
    float value;
    std::memcpy(&value, &bits, 4);
    return value;
}

std::size_t require_count(const json &j, const char *key)
{
    if (!j.contains(key) || !j[key].is_number_unsigned())
        throw format_error(std::string("CTF1 header: missing or invalid '") + key + "'");
    return j[key].get<std::size_t>();
}

double require_positive(const json &j, const char *key)
{
    if (!j.contains(key) || !j[key].is_number())
        throw format_error(std::string("CTF1 header: missing or invalid '") + key + "'");
    double v = j[key].get<double>();
    if (!(v > 0.0) || !std::isfinite(v))
        throw format_error(std::string("CTF1 header: '") + key + "' must be finite and > 0");
    return v;
}

std::vector<polarization> require_pol_labels(const json &j, const char *key, std::size_t n)
{
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != n)
        throw format_error(std::string("CTF1 header: '") + key + "' must list one label per antenna");
    std::vector<polarization> out;
    out.reserve(n);
    for (const auto &e : j[key])
    {
        if (!e.is_string() || e.get<std::string>().size() != 1)
            throw format_error(std::string("CTF1 header: '") + key + "' labels must be \"V\" or \"H\"");
        char c = e.get<std::string>()[0];
        if (c != 'V' && c != 'H')
            throw format_error(std::string("CTF1 header: '") + key + "' labels must be \"V\" or \"H\"");
        out.push_back(polarization_from_char(c));
    }
    return out;
}

} // namespace

channel_tensor read_container(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw format_error("cannot open container file: " + path);

    std::string header;
    if (!std::getline(in, header))
        throw format_error("CTF1 header: missing header line");

    json j;
    try
    {
        j = json::parse(header);
    }
    catch (const json::exception &e)
    {
        throw format_error(std::string("CTF1 header: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("magic") || !j["magic"].is_string() ||
        j["magic"].get<std::string>() != "CTF1")
        throw format_error("CTF1 header: bad magic");

    channel_tensor t;
    t.grid.n_time = require_count(j, "n_time");
    t.grid.n_freq = require_count(j, "n_freq");
    t.n_rx = require_count(j, "n_rx");
    t.n_tx = require_count(j, "n_tx");
    if (t.grid.n_time < 1 || t.grid.n_freq < 1 || t.n_rx < 1 || t.n_tx < 1)
        throw format_error("CTF1 header: dimensions must be >= 1");
    t.grid.time_spacing = require_positive(j, "T_m");
    t.grid.freq_spacing = require_positive(j, "F_m");
    t.grid.carrier_freq = require_positive(j, "f_c");
    t.pol_rx = require_pol_labels(j, "pol_rx", t.n_rx);
    t.pol_tx = require_pol_labels(j, "pol_tx", t.n_tx);

    if (!j.contains("speed_per_sample") || !j["speed_per_sample"].is_array() ||
        j["speed_per_sample"].size() != t.grid.n_time)
        throw format_error("CTF1 header: 'speed_per_sample' must list one value per time sample");
    t.grid.speed_per_sample.reserve(t.grid.n_time);
    for (const auto &e : j["speed_per_sample"])
    {
        if (!e.is_number())
            throw format_error("CTF1 header: speeds must be numbers");
        double v = e.get<double>();
        if (!(v >= 0.0) || !std::isfinite(v))
            throw format_error("CTF1 header: speeds must be finite and >= 0");
        t.grid.speed_per_sample.push_back(v);
    }

    const std::size_t n_samples = t.sample_count();
    const std::size_t n_bytes = n_samples * 8;
    std::vector<char> payload(n_bytes);
    in.read(payload.data(), static_cast<std::streamsize>(n_bytes));
    if (static_cast<std::size_t>(in.gcount()) != n_bytes)
        throw format_error("CTF1 payload: shorter than declared dimensions");
    char probe;
    if (in.read(&probe, 1) && in.gcount() == 1)
        throw format_error("CTF1 payload: trailing bytes after declared samples");

    t.samples.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
    {
        float re = get_f32_le(payload.data() + 8 * i);
        float im = get_f32_le(payload.data() + 8 * i + 4);
        if (!std::isfinite(re) || !std::isfinite(im))
            throw data_error("CTF1 payload: non-finite sample");
        t.samples[i] = cxd(re, im);
    }
    return t;
}

void write_container(const channel_tensor &tensor, const std::string &path)
{
    tensor.validate();

    json j;
    j["magic"] = "CTF1";
    j["n_time"] = tensor.grid.n_time;
    j["n_freq"] = tensor.grid.n_freq;
    j["n_rx"] = tensor.n_rx;
    j["n_tx"] = tensor.n_tx;
    j["T_m"] = tensor.grid.time_spacing;
    j["F_m"] = tensor.grid.freq_spacing;
    j["f_c"] = tensor.grid.carrier_freq;
    json pr = json::array(), pt = json::array();
    for (polarization p : tensor.pol_rx)
        pr.push_back(std::string(1, polarization_to_char(p)));
    for (polarization p : tensor.pol_tx)
        pt.push_back(std::string(1, polarization_to_char(p)));
    j["pol_rx"] = pr;
    j["pol_tx"] = pt;
    j["speed_per_sample"] = tensor.grid.speed_per_sample;

    std::vector<char> payload;
    payload.reserve(tensor.samples.size() * 8);
    for (const cxd &s : tensor.samples)
    {
        float re = static_cast<float>(s.real());
        float im = static_cast<float>(s.imag());
        if (!std::isfinite(re) || !std::isfinite(im))
            throw data_error("CTF1 payload: sample overflows 32-bit float");
        put_f32_le(payload, re);
        put_f32_le(payload, im);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw format_error("cannot open container file for writing: " + path);
    const std::string header = j.dump();
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.put('\n');
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out)
        throw format_error("short write to container file: " + path);
}

} // namespace chanlqs
