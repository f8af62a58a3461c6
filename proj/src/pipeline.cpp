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

#include "chanlqs/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chanlqs/container.hpp"
#include "chanlqs/dpss.hpp"
#include "chanlqs/errors.hpp"
#include "chanlqs/glsf.hpp"
#include "chanlqs/preprocess.hpp"

namespace chanlqs
{

const char *const software_version = "0.1.0";

namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_g(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn)
{
    if (threads <= 1 || n <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
    {
        pool.emplace_back([&]() {
            while (true)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    }
    for (std::thread &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

double clamp_unit(double v)
{
    if (v > 1.0 + 1e-9)
        throw numerical_error("measure exceeds 1 beyond rounding");
    return std::min(1.0, std::max(0.0, v));
}

std::string sanitize_label(const std::string &s)
{
    std::string out;
    for (char c : s)
        out.push_back((std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
                          ? c
                          : '-');
    return out.empty() ? std::string("x") : out;
}

// ---------------------------------------------------------------- JSON input

template <typename T> T get_or(const json &j, const char *key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception &)
    {
        throw config_error(std::string("config: invalid value for '") + key + "'");
    }
}

json load_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open JSON file: " + path);
    try
    {
        return json::parse(in);
    }
    catch (const json::exception &e)
    {
        throw config_error("invalid JSON in " + path + ": " + e.what());
    }
}

std::vector<polarization> parse_pol_list(const json &j, const char *key)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw config_error(std::string("scene: missing polarization list '") + key + "'");
    std::vector<polarization> out;
    for (const auto &e : j.at(key))
    {
        const std::string s = e.get<std::string>();
        if (s.size() != 1)
            throw config_error("scene: polarization labels must be \"V\" or \"H\"");
        out.push_back(polarization_from_char(s[0]));
    }
    return out;
}

std::vector<std::array<double, 2>> parse_positions(const json &j, const char *key)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw config_error(std::string("scene: missing antenna positions '") + key + "'");
    std::vector<std::array<double, 2>> out;
    for (const auto &e : j.at(key))
    {
        if (!e.is_array() || e.size() != 2)
            throw config_error("scene: antenna positions must be [x, y] in wavelengths");
        out.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return out;
}

} // namespace

scene_description load_scene(const std::string &path)
{
    const json j = load_json_file(path);
    if (!j.contains("grid") || !j.at("grid").is_object())
        throw config_error("scene: missing 'grid' object");
    const json &g = j.at("grid");

    scene_description scene;
    scene.grid.time_spacing = get_or<double>(g, "T_m", 0.0);
    scene.grid.freq_spacing = get_or<double>(g, "F_m", 0.0);
    scene.grid.carrier_freq = get_or<double>(g, "f_c", 0.0);
    scene.grid.n_time = get_or<std::size_t>(g, "n_time", 0);
    scene.grid.n_freq = get_or<std::size_t>(g, "n_freq", 0);
    if (g.contains("speed_per_sample"))
        scene.grid.speed_per_sample = g.at("speed_per_sample").get<std::vector<double>>();
    else
        scene.grid.speed_per_sample.assign(scene.grid.n_time,
                                           get_or<double>(g, "speed_mps", 0.0));
    scene.grid.validate();

    scene.steering.tx_positions = parse_positions(j, "tx_positions");
    scene.steering.rx_positions = parse_positions(j, "rx_positions");
    scene.steering.pol_tx = parse_pol_list(j, "pol_tx");
    scene.steering.pol_rx = parse_pol_list(j, "pol_rx");
    scene.seed = get_or<std::uint64_t>(j, "seed", 0);

    if (!j.contains("clusters") || !j.at("clusters").is_array())
        throw config_error("scene: missing 'clusters' array");
    for (const auto &cj : j.at("clusters"))
    {
        scatterer_cluster c;
        c.doppler_hz = get_or<double>(cj, "doppler_hz", 0.0);
        c.delay_s = get_or<double>(cj, "delay_s", 0.0);
        c.power = get_or<double>(cj, "power", 1.0);
        if (cj.contains("pol_gain"))
        {
            const auto &pg = cj.at("pol_gain");
            if (!pg.is_array() || pg.size() != 2 || pg[0].size() != 2 || pg[1].size() != 2)
                throw config_error("scene: pol_gain must be a 2x2 matrix");
            for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s)
                    c.pol_gain[r][s] = pg[r][s].get<double>();
        }
        c.birth_time = get_or<std::size_t>(cj, "birth", 0);
        c.death_time = get_or<std::size_t>(cj, "death", scene.grid.n_time);
        c.n_subpaths = get_or<std::size_t>(cj, "n_subpaths", 20);
        c.doppler_spread_hz = get_or<double>(cj, "doppler_spread_hz", 0.0);
        c.ramp_samples = get_or<std::size_t>(cj, "ramp_samples", 0);
        scene.clusters.push_back(c);
        scene.steering.tx_angle_rad.push_back(get_or<double>(cj, "aod_rad", 0.0));
        scene.steering.rx_angle_rad.push_back(get_or<double>(cj, "aoa_rad", 0.0));
    }
    return scene;
}

channel_tensor realize_scene(const scene_description &scene,
                             std::optional<std::uint64_t> seed_override)
{
    return generate(scene.clusters, scene.steering, scene.grid,
                    seed_override.value_or(scene.seed));
}

void run_config::validate() const
{
    if (ctf1_path.empty() == scene_path.empty())
        throw config_error("config: exactly one of input.ctf1 and input.scene is required");
    for (double th : thresholds)
        if (!(th >= 0.0 && th <= 1.0))
            throw config_error("config: thresholds must lie in [0, 1]");
    if (thresholds.empty())
        throw config_error("config: at least one threshold is required");
    if (!(max_distance_m > 0.0))
        throw config_error("config: max_distance_m must be > 0");
    if (!(noise_margin_db >= 0.0))
        throw config_error("config: noise_margin_db must be >= 0");
    if (region_time < 1 || region_freq < 1)
        throw config_error("config: normalization region sizes must be >= 1");
    if (doppler_bins % 2 == 0)
        throw config_error("config: doppler_bins must be odd");
    if (stride_time < 1 || stride_freq < 1 || corr_avg_time < 1 || corr_avg_freq < 1)
        throw config_error("config: strides and averaging lengths must be >= 1");
    if (kinds.empty())
        throw config_error("config: at least one measure kind is required");
    if (!std::isfinite(gamma_db))
        throw config_error("config: gamma_db must be finite");
    if (pilot_spacing < 1 || interval_time < 1 || interval_freq < 1)
        throw config_error("config: estimator interval parameters must be >= 1");
    if (!(du_tau_max_s > 0.0) || !(du_d_stat_min_m > 0.0) || !(du_w_max_m > 0.0) ||
        !(du_ratio_threshold > 0.0))
        throw config_error("config: DU parameters must be > 0");
}

run_config load_run_config(const std::string &path)
{
    const json j = load_json_file(path);
    run_config cfg;

    if (!j.contains("input") || !j.at("input").is_object())
        throw config_error("config: missing 'input' object");
    const json &in = j.at("input");
    cfg.ctf1_path = get_or<std::string>(in, "ctf1", "");
    cfg.scene_path = get_or<std::string>(in, "scene", "");
    cfg.seed = get_or<std::uint64_t>(in, "seed", 0);

    if (j.contains("subarrays"))
    {
        for (const auto &sj : j.at("subarrays"))
        {
            subarray_selection sel;
            sel.name = get_or<std::string>(sj, "name", "sub");
            sel.rx_indices = get_or<std::vector<std::size_t>>(sj, "rx", {});
            sel.tx_indices = get_or<std::vector<std::size_t>>(sj, "tx", {});
            cfg.subarrays.push_back(sel);
        }
    }

    if (j.contains("preprocessing"))
    {
        const json &p = j.at("preprocessing");
        cfg.noise_floor = get_or<bool>(p, "noise_floor", cfg.noise_floor);
        cfg.noise_margin_db = get_or<double>(p, "noise_margin_db", cfg.noise_margin_db);
        cfg.normalize = get_or<bool>(p, "normalize", cfg.normalize);
        cfg.region_time = get_or<std::size_t>(p, "region_time", cfg.region_time);
        cfg.region_freq = get_or<std::size_t>(p, "region_freq", cfg.region_freq);
    }

    if (j.contains("estimator"))
    {
        const json &e = j.at("estimator");
        cfg.window_time = get_or<std::size_t>(e, "window_time", cfg.window_time);
        cfg.window_freq = get_or<std::size_t>(e, "window_freq", cfg.window_freq);
        cfg.halfbandwidth = get_or<double>(e, "halfbandwidth", cfg.halfbandwidth);
        cfg.tapers_time = get_or<std::size_t>(e, "tapers_time", cfg.tapers_time);
        cfg.tapers_freq = get_or<std::size_t>(e, "tapers_freq", cfg.tapers_freq);
        cfg.doppler_bins = get_or<std::size_t>(e, "doppler_bins", cfg.doppler_bins);
        cfg.delay_bins = get_or<std::size_t>(e, "delay_bins", cfg.delay_bins);
        cfg.stride_time = get_or<std::size_t>(e, "stride_time", cfg.stride_time);
        cfg.stride_freq = get_or<std::size_t>(e, "stride_freq", cfg.stride_freq);
        cfg.corr_avg_time = get_or<std::size_t>(e, "corr_avg_time", cfg.corr_avg_time);
        cfg.corr_avg_freq = get_or<std::size_t>(e, "corr_avg_freq", cfg.corr_avg_freq);
    }

    if (j.contains("measures"))
    {
        const json &m = j.at("measures");
        if (m.contains("kinds"))
        {
            for (const auto &k : m.at("kinds"))
                cfg.kinds.push_back(measure_kind_from_name(k.get<std::string>()));
        }
        cfg.gamma_db = get_or<double>(m, "gamma_db", cfg.gamma_db);
        cfg.pilot_spacing = get_or<std::size_t>(m, "pilot_spacing", cfg.pilot_spacing);
        cfg.interval_time = get_or<std::size_t>(m, "interval_time", cfg.interval_time);
        cfg.interval_freq = get_or<std::size_t>(m, "interval_freq", cfg.interval_freq);
    }
    if (cfg.kinds.empty())
    {
        cfg.kinds = {measure_kind::col_doppler,      measure_kind::col_delay,
                     measure_kind::cmd_tx,           measure_kind::cmd_rx,
                     measure_kind::cmd_full,         measure_kind::snr_tx,
                     measure_kind::snr_rx,           measure_kind::mse_doppler_exact,
                     measure_kind::mse_doppler_ap,   measure_kind::mse_delay_exact,
                     measure_kind::mse_delay_ap};
    }

    if (j.contains("lqs"))
    {
        const json &l = j.at("lqs");
        if (l.contains("thresholds"))
            cfg.thresholds = l.at("thresholds").get<std::vector<double>>();
        cfg.max_distance_m = get_or<double>(l, "max_distance_m", cfg.max_distance_m);
        const std::string mode = get_or<std::string>(l, "distance_mode", "mean_speed");
        if (mode == "odometer")
            cfg.odometer_distance = true;
        else if (mode != "mean_speed")
            throw config_error("config: distance_mode must be mean_speed or odometer");
    }

    if (j.contains("du"))
    {
        const json &d = j.at("du");
        cfg.du_tau_max_s = get_or<double>(d, "tau_max_s", cfg.du_tau_max_s);
        cfg.du_d_stat_min_m = get_or<double>(d, "d_stat_min_m", cfg.du_d_stat_min_m);
        cfg.du_w_max_m = get_or<double>(d, "w_max_m", cfg.du_w_max_m);
        cfg.du_ratio_threshold = get_or<double>(d, "ratio_threshold", cfg.du_ratio_threshold);
    }

    cfg.correlation_offset_m = get_or<double>(j, "correlation_offset_m", cfg.correlation_offset_m);
    cfg.validate();
    return cfg;
}

// ------------------------------------------------------------------ analysis

namespace
{

bool is_spatial(measure_kind k)
{
    switch (k)
    {
    case measure_kind::cmd_tx:
    case measure_kind::cmd_rx:
    case measure_kind::cmd_full:
    case measure_kind::snr_tx:
    case measure_kind::snr_rx:
        return true;
    default:
        return false;
    }
}

bool uses_doppler_axis(measure_kind k)
{
    return k == measure_kind::col_doppler || k == measure_kind::mse_doppler_exact ||
           k == measure_kind::mse_doppler_ap;
}

bool uses_exact_mse(measure_kind k)
{
    return k == measure_kind::mse_doppler_exact || k == measure_kind::mse_delay_exact;
}

struct sublink_data
{
    std::size_t k = 0, l = 0;
    std::string label;
    psd_track doppler;
    psd_track delay;
    std::vector<char> valid;                     // per time position
    std::vector<std::vector<char>> zero_doppler; // [pos][q]: all-zero PSD
    std::vector<std::vector<char>> zero_delay;
    std::vector<std::vector<mse_model>> mse_doppler; // built on demand
    std::vector<std::vector<mse_model>> mse_delay;
};

struct spatial_data
{
    corr_matrix_track track;
    std::vector<char> valid; // per bin
};

struct offset_accumulator
{
    std::vector<measure_pair> pairs;
    std::map<long long, std::pair<double, std::size_t>> displacement; // sum, count
};

struct curve_artifact
{
    std::string setup; // subarray name, plus sub-link for per-link measures
    measure_kind kind = measure_kind::col_doppler;
    measure_curve curve;
    double bin_duration = 0.0;
    std::map<long long, double> distance; // per offset [m]
    std::map<long long, double> fixed_offset_series; // aligned bin -> value
};

// Writes `content` to `path`, registering it for cleanup before the write.
void write_artifact(const std::string &path, const std::string &content,
                    std::vector<std::string> &written)
{
    written.push_back(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw config_error("cannot open output file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw config_error("short write to output file: " + path);
}

json du_report_to_json(const du_report &rep)
{
    json j;
    j["nu_max_hz"] = rep.nu_max_hz;
    j["tau_max_s"] = rep.tau_max_s;
    j["delta_nu_max_hz"] = rep.delta_nu_max_hz;
    j["delta_tau_max_s"] = rep.delta_tau_max_s;
    j["coherence_time_s"] = rep.coherence_time_s;
    j["coherence_freq_hz"] = rep.coherence_freq_hz;
    j["stationarity_time_s"] = rep.stationarity_time_s;
    j["stationarity_freq_hz"] = rep.stationarity_freq_hz;
    j["dispersion_product"] = rep.dispersion_product;
    j["correlation_product"] = rep.correlation_product;
    j["angular_spread_rad"] = rep.angular_spread_rad;
    j["angular_spread_deg"] = rep.angular_spread_rad * 180.0 / 3.14159265358979323846;
    j["ratio_threshold"] = rep.ratio_threshold;
    j["doubly_underspread"] = rep.doubly_underspread;
    return j;
}

json config_to_json(const run_config &cfg)
{
    json j;
    j["input"]["ctf1"] = cfg.ctf1_path;
    j["input"]["scene"] = cfg.scene_path;
    j["input"]["seed"] = cfg.seed;
    json subs = json::array();
    for (const subarray_selection &s : cfg.subarrays)
        subs.push_back({{"name", s.name}, {"rx", s.rx_indices}, {"tx", s.tx_indices}});
    j["subarrays"] = subs;
    j["preprocessing"] = {{"noise_floor", cfg.noise_floor},
                          {"noise_margin_db", cfg.noise_margin_db},
                          {"normalize", cfg.normalize},
                          {"region_time", cfg.region_time},
                          {"region_freq", cfg.region_freq}};
    j["estimator"] = {{"window_time", cfg.window_time},
                      {"window_freq", cfg.window_freq},
                      {"halfbandwidth", cfg.halfbandwidth},
                      {"tapers_time", cfg.tapers_time},
                      {"tapers_freq", cfg.tapers_freq},
                      {"doppler_bins", cfg.doppler_bins},
                      {"delay_bins", cfg.delay_bins},
                      {"stride_time", cfg.stride_time},
                      {"stride_freq", cfg.stride_freq},
                      {"corr_avg_time", cfg.corr_avg_time},
                      {"corr_avg_freq", cfg.corr_avg_freq}};
    json kinds = json::array();
    for (measure_kind k : cfg.kinds)
        kinds.push_back(measure_kind_name(k));
    j["measures"] = {{"kinds", kinds},
                     {"gamma_db", cfg.gamma_db},
                     {"pilot_spacing", cfg.pilot_spacing},
                     {"interval_time", cfg.interval_time},
                     {"interval_freq", cfg.interval_freq}};
    j["lqs"] = {{"thresholds", cfg.thresholds},
                {"max_distance_m", cfg.max_distance_m},
                {"distance_mode", cfg.odometer_distance ? "odometer" : "mean_speed"}};
    j["du"] = {{"tau_max_s", cfg.du_tau_max_s},
               {"d_stat_min_m", cfg.du_d_stat_min_m},
               {"w_max_m", cfg.du_w_max_m},
               {"ratio_threshold", cfg.du_ratio_threshold}};
    j["correlation_offset_m"] = cfg.correlation_offset_m;
    return j;
}

} // namespace

analysis_report run_analysis(const run_config &cfg, const std::string &out_dir,
                             unsigned threads)
{
    cfg.validate();
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    analysis_report report;

    try
    {
        // ------------------------------------------------------------ input
        channel_tensor tensor;
        if (!cfg.ctf1_path.empty())
        {
            tensor = read_container(cfg.ctf1_path);
        }
        else
        {
            const scene_description scene = load_scene(cfg.scene_path);
            tensor = realize_scene(scene, cfg.seed);
        }
        tensor.validate();

        const double v_mean = tensor.grid.mean_speed();
        const double t_m = tensor.grid.time_spacing;
        if (v_mean <= 0.0)
            report.warnings.push_back("mean speed is zero; distances are reported as 0");

        // cumulative odometer distance per time sample
        std::vector<double> odometer(tensor.grid.n_time + 1, 0.0);
        for (std::size_t m = 0; m < tensor.grid.n_time; ++m)
            odometer[m + 1] = odometer[m] + tensor.grid.speed_per_sample[m] * t_m;

        std::vector<subarray_selection> subarrays = cfg.subarrays;
        if (subarrays.empty())
        {
            subarray_selection all;
            all.name = "full";
            subarrays.push_back(all);
        }
        for (subarray_selection &s : subarrays)
        {
            if (s.rx_indices.empty())
                for (std::size_t k = 0; k < tensor.n_rx; ++k)
                    s.rx_indices.push_back(k);
            if (s.tx_indices.empty())
                for (std::size_t l = 0; l < tensor.n_tx; ++l)
                    s.tx_indices.push_back(l);
        }

        const bool any_psd = std::any_of(cfg.kinds.begin(), cfg.kinds.end(),
                                         [](measure_kind k) { return !is_spatial(k); });
        const bool any_spatial = std::any_of(cfg.kinds.begin(), cfg.kinds.end(),
                                             [](measure_kind k) { return is_spatial(k); });

        dpss_bank bank;
        if (any_psd)
            bank = make_dpss_bank(cfg.window_time, cfg.window_freq, cfg.halfbandwidth,
                                  cfg.tapers_time, cfg.tapers_freq);

        const double gamma_lin = std::pow(10.0, cfg.gamma_db / 10.0);
        const estimator_config est_time{gamma_lin, cfg.pilot_spacing, cfg.interval_time};
        const estimator_config est_freq{gamma_lin, cfg.pilot_spacing, cfg.interval_freq};

        std::vector<curve_artifact> curves;

        // -------------------------------------------------- per sub-array
        for (const subarray_selection &sel : subarrays)
        {
            channel_tensor sub = select_subarray(tensor, sel);
            std::vector<char> flagged_time(sub.grid.n_time, 0);
            if (cfg.noise_floor)
                sub = apply_noise_floor(sub, cfg.noise_margin_db);
            if (cfg.normalize)
            {
                normalization_result nres =
                    normalize_copolarized(sub, cfg.region_time, cfg.region_freq);
                sub = std::move(nres.tensor);
                for (const auto &[bt, bf] : nres.degenerate_blocks)
                {
                    const std::size_t m0 = bt * cfg.region_time;
                    const std::size_t m1 = std::min(m0 + cfg.region_time, sub.grid.n_time);
                    for (std::size_t m = m0; m < m1; ++m)
                        flagged_time[m] = 1;
                }
                if (!nres.degenerate_blocks.empty())
                    report.warnings.push_back(
                        sel.name + ": " + std::to_string(nres.degenerate_blocks.size()) +
                        " degenerate normalization block(s) skipped");
            }

            // ---------------------------------------- per-sub-link PSD tracks
            std::vector<sublink_data> sublinks;
            if (any_psd)
            {
                for (std::size_t k = 0; k < sub.n_rx; ++k)
                    for (std::size_t l = 0; l < sub.n_tx; ++l)
                    {
                        sublink_data d;
                        d.k = k;
                        d.l = l;
                        d.label = "rx" + std::to_string(k) + "tx" + std::to_string(l) + "_" +
                                  polarization_to_char(sub.pol_rx[k]) +
                                  polarization_to_char(sub.pol_tx[l]);
                        sublinks.push_back(std::move(d));
                    }
                parallel_for(sublinks.size(), threads, [&](std::size_t i) {
                    sublink_data &d = sublinks[i];
                    const glsf_estimate g =
                        estimate_glsf(sub, d.k, d.l, bank, cfg.doppler_bins, cfg.delay_bins,
                                      cfg.stride_time, cfg.stride_freq);
                    d.doppler = marginal_doppler(g);
                    d.delay = marginal_delay(g);
                    const std::size_t off_t = cfg.window_time / 2;
                    d.valid.assign(g.time_pos.size(), 1);
                    for (std::size_t it = 0; it < g.time_pos.size(); ++it)
                        for (std::size_t m = g.time_pos[it] - off_t;
                             m < g.time_pos[it] - off_t + cfg.window_time; ++m)
                            if (flagged_time[m])
                                d.valid[it] = 0;
                    d.zero_doppler.assign(g.time_pos.size(),
                                          std::vector<char>(g.freq_pos.size(), 0));
                    d.zero_delay = d.zero_doppler;
                    for (std::size_t it = 0; it < g.time_pos.size(); ++it)
                        for (std::size_t iq = 0; iq < g.freq_pos.size(); ++iq)
                        {
                            d.zero_doppler[it][iq] = arma::norm(d.doppler.values[it][iq], 1) == 0.0;
                            d.zero_delay[it][iq] = arma::norm(d.delay.values[it][iq], 1) == 0.0;
                        }
                });

                const bool need_exact = std::any_of(cfg.kinds.begin(), cfg.kinds.end(),
                                                    uses_exact_mse);
                if (need_exact)
                {
                    for (sublink_data &d : sublinks)
                    {
                        const std::size_t np = d.doppler.time_pos.size();
                        const std::size_t nq = d.doppler.freq_pos.size();
                        d.mse_doppler.assign(np, std::vector<mse_model>(nq));
                        d.mse_delay.assign(np, std::vector<mse_model>(nq));
                        parallel_for(np, threads, [&](std::size_t it) {
                            for (std::size_t iq = 0; iq < nq; ++iq)
                            {
                                d.mse_doppler[it][iq] = make_mse_model(
                                    d.doppler.values[it][iq], est_time, d.doppler.rate);
                                d.mse_delay[it][iq] = make_mse_model(
                                    d.delay.values[it][iq], est_freq, d.delay.rate);
                            }
                        });
                    }
                }
            }

            // ------------------------------------------ spatial tracks
            std::map<corr_side, spatial_data> spatial;
            if (any_spatial)
            {
                std::vector<corr_side> sides;
                for (measure_kind k : cfg.kinds)
                {
                    if (k == measure_kind::cmd_tx || k == measure_kind::snr_tx)
                        sides.push_back(corr_side::tx);
                    else if (k == measure_kind::cmd_rx || k == measure_kind::snr_rx)
                        sides.push_back(corr_side::rx);
                    else if (k == measure_kind::cmd_full)
                        sides.push_back(corr_side::full);
                }
                std::sort(sides.begin(), sides.end());
                sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
                for (corr_side side : sides)
                {
                    spatial_data sd;
                    sd.track = estimate_corr_track(sub, side, cfg.corr_avg_time,
                                                   cfg.corr_avg_freq);
                    const std::size_t n_bins = sd.track.matrices.size();
                    sd.valid.assign(n_bins, 1);
                    for (std::size_t b = 0; b < n_bins; ++b)
                        for (std::size_t m = b * cfg.corr_avg_time;
                             m < (b + 1) * cfg.corr_avg_time; ++m)
                            if (flagged_time[m])
                                sd.valid[b] = 0;
                    spatial.emplace(side, std::move(sd));
                }
            }

            // ---------------------------------------------- offset ranges
            const double bin_dur_psd = static_cast<double>(cfg.stride_time) * t_m;
            const double bin_dur_corr = static_cast<double>(cfg.corr_avg_time) * t_m;
            auto offset_bound = [&](double bin_dur, std::size_t n_positions) -> long long {
                if (n_positions < 2)
                    return 0;
                long long bound = static_cast<long long>(n_positions) - 1;
                if (v_mean > 0.0)
                    bound = std::min(bound, static_cast<long long>(std::ceil(
                                                cfg.max_distance_m / (bin_dur * v_mean))));
                return bound;
            };

            // ------------------------------------------------ pair evaluation
            for (measure_kind kind : cfg.kinds)
            {
                if (is_spatial(kind))
                {
                    const corr_side side =
                        (kind == measure_kind::cmd_tx || kind == measure_kind::snr_tx)
                            ? corr_side::tx
                            : (kind == measure_kind::cmd_rx || kind == measure_kind::snr_rx)
                                  ? corr_side::rx
                                  : corr_side::full;
                    const spatial_data &sd = spatial.at(side);
                    const std::size_t n_bins = sd.track.matrices.size();
                    const long long bound = offset_bound(bin_dur_corr, n_bins);

                    std::vector<offset_accumulator> acc(n_bins);
                    parallel_for(n_bins, threads, [&](std::size_t i) {
                        if (!sd.valid[i])
                            return;
                        for (long long off = -bound; off <= bound; ++off)
                        {
                            const long long jj = static_cast<long long>(i) + off;
                            if (jj < 0 || jj >= static_cast<long long>(n_bins) ||
                                !sd.valid[static_cast<std::size_t>(jj)])
                                continue;
                            const arma::cx_mat &ra = sd.track.matrices[i];
                            const arma::cx_mat &rb =
                                sd.track.matrices[static_cast<std::size_t>(jj)];
                            double value = 0.0;
                            try
                            {
                                if (kind == measure_kind::snr_tx || kind == measure_kind::snr_rx)
                                    value = relative_snr(ra, rb);
                                else
                                    value = cmd(ra, rb);
                            }
                            catch (const undefined_measure &)
                            {
                                continue;
                            }
                            acc[i].pairs.push_back(
                                {value, static_cast<long long>(i), jj, kind});
                            const double center_i =
                                odometer[i * cfg.corr_avg_time + cfg.corr_avg_time / 2];
                            const double center_j = odometer[static_cast<std::size_t>(jj) *
                                                                 cfg.corr_avg_time +
                                                             cfg.corr_avg_time / 2];
                            auto &dacc = acc[i].displacement[off];
                            dacc.first += center_j - center_i;
                            dacc.second += 1;
                        }
                    });

                    curve_artifact art;
                    art.setup = sel.name;
                    art.kind = kind;
                    art.bin_duration = bin_dur_corr;
                    std::vector<measure_pair> pairs;
                    std::map<long long, std::pair<double, std::size_t>> disp;
                    for (const offset_accumulator &a : acc)
                    {
                        pairs.insert(pairs.end(), a.pairs.begin(), a.pairs.end());
                        for (const auto &[off, dc] : a.displacement)
                        {
                            disp[off].first += dc.first;
                            disp[off].second += dc.second;
                        }
                    }
                    art.curve = average_measure(pairs, -bound, bound);
                    art.curve.scenario_id = art.setup;
                    if (art.curve.offsets.size() != static_cast<std::size_t>(2 * bound + 1))
                        report.warnings.push_back(art.setup + ":" + measure_kind_name(kind) +
                                                  ": offsets without valid pairs omitted");
                    for (long long off : art.curve.offsets)
                        art.distance[off] =
                            cfg.odometer_distance
                                ? disp[off].first / static_cast<double>(disp[off].second)
                                : static_cast<double>(off) * bin_dur_corr * v_mean;
                    // series at the fixed correlation offset
                    const long long corr_off =
                        (v_mean > 0.0) ? std::llround(cfg.correlation_offset_m /
                                                      (bin_dur_corr * v_mean))
                                       : 0;
                    for (const measure_pair &p : pairs)
                        if (p.m_prime - p.m == corr_off)
                            art.fixed_offset_series[p.m] = p.value;
                    curves.push_back(std::move(art));
                }
                else
                {
                    for (const sublink_data &d : sublinks)
                    {
                        const bool doppler_axis = uses_doppler_axis(kind);
                        const psd_track &track = doppler_axis ? d.doppler : d.delay;
                        const std::vector<std::vector<char>> &zero =
                            doppler_axis ? d.zero_doppler : d.zero_delay;
                        const std::vector<std::vector<mse_model>> &models =
                            doppler_axis ? d.mse_doppler : d.mse_delay;
                        const estimator_config &ecfg = doppler_axis ? est_time : est_freq;
                        const std::size_t n_pos = track.time_pos.size();
                        const std::size_t n_q = track.freq_pos.size();
                        const long long bound = offset_bound(bin_dur_psd, n_pos);

                        std::vector<offset_accumulator> acc(n_pos);
                        parallel_for(n_pos, threads, [&](std::size_t i) {
                            if (!d.valid[i])
                                return;
                            for (long long off = -bound; off <= bound; ++off)
                            {
                                const long long jj = static_cast<long long>(i) + off;
                                if (jj < 0 || jj >= static_cast<long long>(n_pos) ||
                                    !d.valid[static_cast<std::size_t>(jj)])
                                    continue;
                                const std::size_t j = static_cast<std::size_t>(jj);
                                double sum = 0.0;
                                std::size_t used = 0;
                                for (std::size_t iq = 0; iq < n_q; ++iq)
                                {
                                    if (zero[i][iq] || zero[j][iq])
                                        continue;
                                    double value = 0.0;
                                    switch (kind)
                                    {
                                    case measure_kind::col_doppler:
                                    case measure_kind::col_delay:
                                        value = collinearity_psd(track.values[i][iq],
                                                                 track.values[j][iq]);
                                        break;
                                    case measure_kind::mse_doppler_ap:
                                    case measure_kind::mse_delay_ap:
                                        value = approx_relative_mse(track.values[i][iq],
                                                                    track.values[j][iq], ecfg,
                                                                    track.rate);
                                        break;
                                    default:
                                        value = clamp_unit(
                                            models[i][iq].matched_mse /
                                            mismatched_mse(models[i][iq], models[j][iq]));
                                        break;
                                    }
                                    sum += value;
                                    ++used;
                                }
                                if (used == 0)
                                    continue;
                                acc[i].pairs.push_back({sum / static_cast<double>(used),
                                                        static_cast<long long>(i), jj, kind});
                                auto &dacc = acc[i].displacement[off];
                                dacc.first += odometer[track.time_pos[j]] -
                                              odometer[track.time_pos[i]];
                                dacc.second += 1;
                            }
                        });

                        curve_artifact art;
                        art.setup = sel.name + "/" + d.label;
                        art.kind = kind;
                        art.bin_duration = bin_dur_psd;
                        std::vector<measure_pair> pairs;
                        std::map<long long, std::pair<double, std::size_t>> disp;
                        for (const offset_accumulator &a : acc)
                        {
                            pairs.insert(pairs.end(), a.pairs.begin(), a.pairs.end());
                            for (const auto &[off, dc] : a.displacement)
                            {
                                disp[off].first += dc.first;
                                disp[off].second += dc.second;
                            }
                        }
                        art.curve = average_measure(pairs, -bound, bound);
                        art.curve.scenario_id = art.setup;
                        if (art.curve.offsets.size() !=
                            static_cast<std::size_t>(2 * bound + 1))
                            report.warnings.push_back(art.setup + ":" +
                                                      measure_kind_name(kind) +
                                                      ": offsets without valid pairs omitted");
                        for (long long off : art.curve.offsets)
                            art.distance[off] =
                                cfg.odometer_distance
                                    ? disp[off].first / static_cast<double>(disp[off].second)
                                    : static_cast<double>(off) * bin_dur_psd * v_mean;
                        const long long corr_off =
                            (v_mean > 0.0) ? std::llround(cfg.correlation_offset_m /
                                                          (bin_dur_psd * v_mean))
                                           : 0;
                        for (const measure_pair &p : pairs)
                            if (p.m_prime - p.m == corr_off)
                                art.fixed_offset_series[track.time_pos[static_cast<std::size_t>(
                                                            p.m)] /
                                                        cfg.corr_avg_time] = p.value;
                        curves.push_back(std::move(art));
                    }
                }
            }
        }

        // ------------------------------------------------------- emission
        for (const curve_artifact &art : curves)
        {
            std::string csv = "delta_m,distance_m,avg,std,count\n";
            for (std::size_t i = 0; i < art.curve.offsets.size(); ++i)
            {
                csv += std::to_string(art.curve.offsets[i]);
                csv += ',';
                csv += fmt_g(art.distance.at(art.curve.offsets[i]));
                csv += ',';
                csv += fmt_g(art.curve.avg[i]);
                csv += ',';
                csv += fmt_g(art.curve.std_dev[i]);
                csv += ',';
                csv += std::to_string(art.curve.count[i]);
                csv += '\n';
            }
            const std::string name = "curve_" + sanitize_label(art.setup) + "_" +
                                     measure_kind_name(art.kind) + ".csv";
            write_artifact((fs::path(out_dir) / name).string(), csv, written);
        }

        // LQS table
        {
            std::string csv = "setup,measure,eta_th,lqs_distance_m,censored\n";
            for (const curve_artifact &art : curves)
            {
                for (double th : cfg.thresholds)
                {
                    const lqs_result res =
                        extract_lqs(art.curve, th, art.bin_duration, v_mean);
                    double dist = res.lqs_distance;
                    if (res.censored && v_mean > 0.0)
                        dist = std::min(cfg.max_distance_m,
                                        static_cast<double>(art.curve.offsets.back()) *
                                            art.bin_duration * v_mean);
                    csv += art.setup;
                    csv += ',';
                    csv += measure_kind_name(art.kind);
                    csv += ',';
                    csv += fmt_g(th);
                    csv += ',';
                    csv += fmt_g(dist);
                    csv += ',';
                    csv += res.censored ? '1' : '0';
                    csv += '\n';
                }
            }
            write_artifact((fs::path(out_dir) / "lqs_table.csv").string(), csv, written);
        }

        // cross-measure correlation matrix at the fixed offset
        {
            std::string csv = "series";
            for (const curve_artifact &art : curves)
                csv += "," + art.setup + ":" + measure_kind_name(art.kind);
            csv += '\n';
            for (const curve_artifact &a : curves)
            {
                csv += a.setup + ":" + measure_kind_name(a.kind);
                for (const curve_artifact &b : curves)
                {
                    std::vector<double> xs, ys;
                    for (const auto &[bin, val] : a.fixed_offset_series)
                    {
                        auto it = b.fixed_offset_series.find(bin);
                        if (it != b.fixed_offset_series.end())
                        {
                            xs.push_back(val);
                            ys.push_back(it->second);
                        }
                    }
                    std::string cell = "nan";
                    if (xs.size() >= 2)
                    {
                        try
                        {
                            cell = fmt_g(measure_correlation(xs, ys));
                        }
                        catch (const undefined_measure &)
                        {
                        }
                    }
                    csv += "," + cell;
                }
                csv += '\n';
            }
            write_artifact((fs::path(out_dir) / "correlation_matrix.csv").string(), csv,
                           written);
        }

        // DU report
        const double v_max = tensor.grid.max_speed();
        if (v_max > 0.0)
        {
            const du_report rep =
                du_check(v_max, tensor.grid.carrier_freq, cfg.du_tau_max_s,
                         cfg.du_d_stat_min_m, cfg.du_w_max_m, cfg.du_ratio_threshold);
            json dj = du_report_to_json(rep);
            dj["inputs"] = {{"v_max_mps", v_max},
                            {"carrier_freq_hz", tensor.grid.carrier_freq},
                            {"tau_max_s", cfg.du_tau_max_s},
                            {"d_stat_min_m", cfg.du_d_stat_min_m},
                            {"w_max_m", cfg.du_w_max_m}};
            write_artifact((fs::path(out_dir) / "du_report.json").string(), dj.dump(2) + "\n",
                           written);
        }
        else
        {
            report.warnings.push_back("DU check skipped: track speed is zero");
        }

        // manifest
        {
            json mj;
            mj["version"] = software_version;
            mj["config"] = config_to_json(cfg);
            mj["input"] = {{"n_time", tensor.grid.n_time},
                           {"n_freq", tensor.grid.n_freq},
                           {"n_rx", tensor.n_rx},
                           {"n_tx", tensor.n_tx},
                           {"T_m", tensor.grid.time_spacing},
                           {"F_m", tensor.grid.freq_spacing},
                           {"f_c", tensor.grid.carrier_freq},
                           {"seed", cfg.seed}};
            mj["derived"] = {{"mean_speed_mps", v_mean},
                             {"max_speed_mps", v_max},
                             {"bin_duration_psd_s",
                              static_cast<double>(cfg.stride_time) * t_m},
                             {"bin_duration_corr_s",
                              static_cast<double>(cfg.corr_avg_time) * t_m}};
            mj["warnings"] = report.warnings;
            json curve_list = json::array();
            for (const curve_artifact &art : curves)
                curve_list.push_back({{"setup", art.setup},
                                      {"measure", measure_kind_name(art.kind)},
                                      {"bin_duration_s", art.bin_duration},
                                      {"offsets_evaluated", art.curve.offsets.size()}});
            mj["curves"] = curve_list;
            write_artifact((fs::path(out_dir) / "manifest.json").string(), mj.dump(2) + "\n",
                           written);
        }
    }
    catch (...)
    {
        for (const std::string &path : written)
        {
            std::error_code ec;
            fs::remove(path, ec);
        }
        throw;
    }

    report.artifacts = written;
    return report;
}

} // namespace chanlqs
