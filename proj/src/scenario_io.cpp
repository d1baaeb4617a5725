// SPDX-License-Identifier: Apache-2.0
//
// tempofade - temporal multipath fading simulator and link analysis toolkit
// Copyright (C) 2026 the tempofade authors
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

#include "tempofade/scenario_io.hpp"

#include "tempofade/errors.hpp"
#include "tempofade/rng.hpp"

#include <json.hpp>

#include <fstream>

namespace tempofade {

namespace {

using nlohmann::json;

[[noreturn]] void bad_key(const std::string &key, const std::string &what) {
    throw ValidationError("config key '" + key + "': " + what);
}

const json &require(const json &j, const char *field, const std::string &prefix) {
    auto it = j.find(field);
    if (it == j.end())
        bad_key(prefix + field, "missing");
    return *it;
}

double num(const json &j, const char *field, const std::string &prefix) {
    const json &v = require(j, field, prefix);
    if (!v.is_number())
        bad_key(prefix + field, "expected a number");
    return v.get<double>();
}

template <typename T>
T opt(const json &j, const char *field, const std::string &prefix, T fallback) {
    auto it = j.find(field);
    if (it == j.end())
        return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception &) {
        bad_key(prefix + field, "wrong type");
    }
}

Vec3 vec3(const json &j, const char *field, const std::string &prefix) {
    const json &v = require(j, field, prefix);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number())
        bad_key(prefix + field, "expected [x, y, z]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

MovingObject object_from_json(const json &j, const std::string &prefix) {
    MovingObject obj;
    obj.id = opt<std::string>(j, "id", prefix, "object");
    const std::string kind = opt<std::string>(j, "kind", prefix, "vehicle");
    if (kind == "vehicle")
        obj.kind = MovingObject::Kind::Vehicle;
    else if (kind == "human")
        obj.kind = MovingObject::Kind::Human;
    else
        bad_key(prefix + "kind", "expected 'vehicle' or 'human'");
    obj.reflection_coefficient = num(j, "reflection_coefficient", prefix);
    const json &wps = require(j, "waypoints", prefix);
    if (!wps.is_array() || wps.empty())
        bad_key(prefix + "waypoints", "expected a non-empty array");
    for (std::size_t i = 0; i < wps.size(); ++i) {
        const std::string wprefix = prefix + "waypoints[" + std::to_string(i) + "].";
        Waypoint wp;
        wp.t_s = num(wps[i], "t", wprefix);
        wp.pos = vec3(wps[i], "pos", wprefix);
        obj.waypoints.push_back(wp);
    }
    return obj;
}

json object_to_json(const MovingObject &obj) {
    json j;
    j["id"] = obj.id;
    j["kind"] = obj.kind == MovingObject::Kind::Vehicle ? "vehicle" : "human";
    j["reflection_coefficient"] = obj.reflection_coefficient;
    j["waypoints"] = json::array();
    for (const auto &wp : obj.waypoints)
        j["waypoints"].push_back({{"t", wp.t_s}, {"pos", {wp.pos.x, wp.pos.y, wp.pos.z}}});
    return j;
}

Scenario scenario_from_json(const json &j) {
    const std::string prefix = "scenario.";
    Scenario sc;
    sc.name = opt<std::string>(j, "name", prefix, sc.name);
    sc.tx_pos = vec3(j, "tx_pos", prefix);
    sc.rx_pos = vec3(j, "rx_pos", prefix);
    sc.carrier_hz = num(j, "carrier_hz", prefix);
    sc.duration_s = num(j, "duration_s", prefix);
    sc.seed = opt<std::uint64_t>(j, "seed", prefix, sc.seed);
    sc.n_const_scattered = opt<int>(j, "n_const_scattered", prefix, sc.n_const_scattered);
    sc.n_dyn_scattered_per_object =
        opt<int>(j, "n_dyn_scattered_per_object", prefix, sc.n_dyn_scattered_per_object);
    sc.coupling_ratio = opt<double>(j, "coupling_ratio", prefix, sc.coupling_ratio);
    sc.const_scattered_power_fraction = opt<double>(
        j, "const_scattered_power_fraction", prefix, sc.const_scattered_power_fraction);
    sc.scattered_delay_offset_ns =
        opt<double>(j, "scattered_delay_offset_ns", prefix, sc.scattered_delay_offset_ns);
    sc.scattered_delay_spread_ns =
        opt<double>(j, "scattered_delay_spread_ns", prefix, sc.scattered_delay_spread_ns);
    if (auto it = j.find("objects"); it != j.end()) {
        if (!it->is_array())
            bad_key("scenario.objects", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            sc.objects.push_back(object_from_json(
                (*it)[i], "scenario.objects[" + std::to_string(i) + "]."));
    }
    return sc;
}

json scenario_to_json(const Scenario &sc) {
    json j;
    j["name"] = sc.name;
    j["tx_pos"] = {sc.tx_pos.x, sc.tx_pos.y, sc.tx_pos.z};
    j["rx_pos"] = {sc.rx_pos.x, sc.rx_pos.y, sc.rx_pos.z};
    j["carrier_hz"] = sc.carrier_hz;
    j["duration_s"] = sc.duration_s;
    j["seed"] = sc.seed;
    j["n_const_scattered"] = sc.n_const_scattered;
    j["n_dyn_scattered_per_object"] = sc.n_dyn_scattered_per_object;
    j["coupling_ratio"] = sc.coupling_ratio;
    j["const_scattered_power_fraction"] = sc.const_scattered_power_fraction;
    j["scattered_delay_offset_ns"] = sc.scattered_delay_offset_ns;
    j["scattered_delay_spread_ns"] = sc.scattered_delay_spread_ns;
    j["objects"] = json::array();
    for (const auto &obj : sc.objects)
        j["objects"].push_back(object_to_json(obj));
    return j;
}

} // namespace

void RunConfig::validate() const {
    scenario.validate();
    waveform.validate();
    analysis.validate();
    ir.validate();
    if (!(ir_cadence_s > 0.0))
        throw ValidationError("config key 'ir.cadence_s': must be positive");
}

RunConfig load_run_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config: " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }

    RunConfig cfg;
    cfg.scenario = scenario_from_json(require(root, "scenario", ""));

    if (auto it = root.find("waveform"); it != root.end()) {
        const json &w = *it;
        const std::string p = "waveform.";
        cfg.waveform.sample_rate_hz = opt<double>(w, "sample_rate_hz", p, cfg.waveform.sample_rate_hz);
        cfg.waveform.frame_s = opt<double>(w, "frame_s", p, cfg.waveform.frame_s);
        cfg.waveform.norm_mw = opt<double>(w, "norm_mw", p, cfg.waveform.norm_mw);
        cfg.waveform.noise_power_mw =
            opt<double>(w, "noise_power_mw", p, cfg.waveform.noise_power_mw);
        cfg.waveform.bit_seed = opt<std::uint64_t>(w, "bit_seed", p, cfg.waveform.bit_seed);
        cfg.waveform.noise_seed = opt<std::uint64_t>(w, "noise_seed", p, cfg.waveform.noise_seed);
        cfg.waveform.per_sample_gain =
            opt<bool>(w, "per_sample_gain", p, cfg.waveform.per_sample_gain);
    }
    if (auto it = root.find("analysis"); it != root.end()) {
        const json &a = *it;
        const std::string p = "analysis.";
        cfg.analysis.frame_s = opt<double>(a, "frame_s", p, cfg.analysis.frame_s);
        cfg.analysis.bins = opt<int>(a, "bins", p, cfg.analysis.bins);
        cfg.analysis.stationarity_threshold =
            opt<double>(a, "stationarity_threshold", p, cfg.analysis.stationarity_threshold);
        cfg.analysis.threads = opt<unsigned>(a, "threads", p, cfg.analysis.threads);
    }
    if (auto it = root.find("ir"); it != root.end()) {
        const json &r = *it;
        const std::string p = "ir.";
        cfg.ir.floor_db = opt<double>(r, "floor_db", p, cfg.ir.floor_db);
        cfg.ir.gate_ns = opt<double>(r, "gate_ns", p, cfg.ir.gate_ns);
        cfg.ir.max_missed = opt<int>(r, "max_missed", p, cfg.ir.max_missed);
        cfg.ir.los_delay_std_ns = opt<double>(r, "los_delay_std_ns", p, cfg.ir.los_delay_std_ns);
        cfg.ir.power_std_db = opt<double>(r, "power_std_db", p, cfg.ir.power_std_db);
        cfg.ir.corr_threshold = opt<double>(r, "corr_threshold", p, cfg.ir.corr_threshold);
        cfg.ir_cadence_s = opt<double>(r, "cadence_s", p, cfg.ir_cadence_s);
    }

    cfg.validate();
    return cfg;
}

void apply_seed_override(RunConfig &cfg, std::uint64_t seed) {
    cfg.scenario.seed = derive_seed(seed, 0);
    cfg.waveform.bit_seed = derive_seed(seed, 1);
    cfg.waveform.noise_seed = derive_seed(seed, 2);
}

void save_run_config(const std::filesystem::path &path, const RunConfig &cfg) {
    json root;
    root["scenario"] = scenario_to_json(cfg.scenario);
    root["waveform"] = {{"sample_rate_hz", cfg.waveform.sample_rate_hz},
                        {"frame_s", cfg.waveform.frame_s},
                        {"norm_mw", cfg.waveform.norm_mw},
                        {"noise_power_mw", cfg.waveform.noise_power_mw},
                        {"bit_seed", cfg.waveform.bit_seed},
                        {"noise_seed", cfg.waveform.noise_seed},
                        {"per_sample_gain", cfg.waveform.per_sample_gain}};
    root["analysis"] = {{"frame_s", cfg.analysis.frame_s},
                        {"bins", cfg.analysis.bins},
                        {"stationarity_threshold", cfg.analysis.stationarity_threshold},
                        {"threads", cfg.analysis.threads}};
    root["ir"] = {{"floor_db", cfg.ir.floor_db},
                  {"gate_ns", cfg.ir.gate_ns},
                  {"max_missed", cfg.ir.max_missed},
                  {"los_delay_std_ns", cfg.ir.los_delay_std_ns},
                  {"power_std_db", cfg.ir.power_std_db},
                  {"corr_threshold", cfg.ir.corr_threshold},
                  {"cadence_s", cfg.ir_cadence_s}};
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write config: " + path.string());
    out << root.dump(2) << "\n";
}

} // namespace tempofade
