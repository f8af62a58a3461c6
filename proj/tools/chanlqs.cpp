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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chanlqs/container.hpp"
#include "chanlqs/lqs.hpp"
#include "chanlqs/pipeline.hpp"

namespace fs = std::filesystem;

int main(int argc, char **argv)
{
    CLI::App app{"chanlqs - non-stationarity analysis of MIMO radio channels"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(chanlqs::software_version));

    // synth: scene description -> CTF1 container
    auto *synth = app.add_subcommand("synth", "generate a synthetic channel container");
    std::string synth_config, synth_out = ".";
    std::optional<std::uint64_t> synth_seed;
    synth->add_option("--config", synth_config, "scene description JSON")->required();
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--seed", synth_seed, "override the scene seed");

    // analyze: run config -> artifact directory
    auto *analyze = app.add_subcommand("analyze", "run the batch measurement pipeline");
    std::string analyze_config, analyze_out = ".";
    std::optional<std::uint64_t> analyze_seed;
    unsigned analyze_threads = 1;
    analyze->add_option("--config", analyze_config, "run configuration JSON")->required();
    analyze->add_option("--out", analyze_out, "output directory");
    analyze->add_option("--seed", analyze_seed, "override the input seed");
    analyze->add_option("--threads", analyze_threads, "worker threads");

    // du-check: closed-form underspread report
    auto *du = app.add_subcommand("du-check", "doubly-underspread condition check");
    double du_v_kmh = 10.0, du_fc = 2.53e9, du_tau = 5e-6, du_dstat = 1.19, du_w = 15.0,
           du_ratio = 0.1;
    std::string du_out;
    du->add_option("--v-max-kmh", du_v_kmh, "maximal terminal speed [km/h]");
    du->add_option("--fc-hz", du_fc, "carrier frequency [Hz]");
    du->add_option("--tau-max-s", du_tau, "maximal delay [s]");
    du->add_option("--d-stat-m", du_dstat, "minimal stationarity length [m]");
    du->add_option("--w-max-m", du_w, "maximal scatterer size [m]");
    du->add_option("--ratio", du_ratio, "threshold for the 'much smaller' tests");
    du->add_option("--out", du_out, "also write du_report.json into this directory");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*synth)
        {
            const chanlqs::scene_description scene = chanlqs::load_scene(synth_config);
            const chanlqs::channel_tensor tensor = chanlqs::realize_scene(scene, synth_seed);
            fs::create_directories(synth_out);
            const std::string path = (fs::path(synth_out) / "channel.ctf1").string();
            chanlqs::write_container(tensor, path);
            std::cout << path << "\n";
        }
        else if (*analyze)
        {
            chanlqs::run_config cfg = chanlqs::load_run_config(analyze_config);
            if (analyze_seed)
                cfg.seed = *analyze_seed;
            const chanlqs::analysis_report rep =
                chanlqs::run_analysis(cfg, analyze_out, analyze_threads);
            for (const std::string &w : rep.warnings)
                std::cerr << "warning: " << w << "\n";
            for (const std::string &artifact : rep.artifacts)
                std::cout << artifact << "\n";
        }
        else if (*du)
        {
            const chanlqs::du_report rep =
                chanlqs::du_check(du_v_kmh / 3.6, du_fc, du_tau, du_dstat, du_w, du_ratio);
            nlohmann::json j;
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
            const std::string text = j.dump(2) + "\n";
            std::cout << text;
            if (!du_out.empty())
            {
                fs::create_directories(du_out);
                std::ofstream out(fs::path(du_out) / "du_report.json",
                                  std::ios::binary | std::ios::trunc);
                out << text;
            }
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
