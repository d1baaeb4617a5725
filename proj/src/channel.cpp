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

#include "tempofade/channel.hpp"

#include "tempofade/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace tempofade {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

bool is_specular(PathKind k) { return k == PathKind::Los || k == PathKind::DynamicReflected; }
} // namespace

bool IRSnapshot::empty_bin(std::size_t i) const { return !std::isfinite(power_db[i]); }

double path_phase(double phi_rad, double carrier_hz, double delay_s) {
    const double raw = phi_rad - two_pi * carrier_hz * delay_s;
    double wrapped = std::fmod(raw, two_pi);
    if (wrapped < 0.0)
        wrapped += two_pi;
    // fmod can land exactly on two_pi after the correction
    if (wrapped >= two_pi)
        wrapped -= two_pi;
    return wrapped;
}

ComplexGain eval_classical(const ClassicalRicianParams &p, double t_s) {
    ComplexGain h =
        std::polar(p.c0, two_pi * p.doppler_hz * std::cos(p.arrival_angle_rad) * t_s + p.phi0_rad);
    for (const auto &[c, phi] : p.scattered)
        h += std::polar(c, phi);
    return h;
}

ComplexGain eval_temporal(const SceneState &scene, double carrier_hz) {
    ComplexGain h = 0.0;
    for (const auto &p : scene.paths) {
        if (is_specular(p.kind))
            h += std::polar(p.amplitude, path_phase(p.phase_offset_rad, carrier_hz, p.delay_s));
        else
            h += std::polar(p.amplitude, p.phase_offset_rad);
    }
    return h;
}

ComplexGain specular_gain(const SceneState &scene, double carrier_hz) {
    ComplexGain spec = 0.0;
    for (const auto &p : scene.paths)
        if (is_specular(p.kind))
            spec += std::polar(p.amplitude, path_phase(p.phase_offset_rad, carrier_hz, p.delay_s));
    return spec;
}

SpecularScattered specular_scattered_power(const SceneState &scene, double carrier_hz) {
    ComplexGain spec = 0.0;
    double scattered_power = 0.0;
    for (const auto &p : scene.paths) {
        if (is_specular(p.kind))
            spec += std::polar(p.amplitude, path_phase(p.phase_offset_rad, carrier_hz, p.delay_s));
        else
            scattered_power += p.amplitude * p.amplitude;
    }
    return {std::abs(spec), std::sqrt(0.5 * scattered_power)};
}

IRSnapshot impulse_response(const SceneState &scene, double carrier_hz, const DelayGrid &grid) {
    IRSnapshot snap;
    snap.t_s = scene.t_s;
    snap.grid = grid;
    snap.taps.assign(grid.n_bins, ComplexGain{0.0, 0.0});

    for (std::size_t i = 0; i < scene.paths.size(); ++i) {
        const auto &p = scene.paths[i];
        const double pos = (p.delay_s - grid.start_s) / grid.resolution_s;
        const long bin = std::lround(pos);
        if (bin < 0 || static_cast<std::size_t>(bin) >= grid.n_bins)
            throw AnalysisError("impulse_response: path " + std::to_string(i) + " (" +
                                to_string(p.kind) + ") at " + std::to_string(p.delay_s * 1e9) +
                                " ns falls outside the delay grid");
        const double phase = is_specular(p.kind)
                                 ? path_phase(p.phase_offset_rad, carrier_hz, p.delay_s)
                                 : p.phase_offset_rad;
        snap.taps[static_cast<std::size_t>(bin)] += std::polar(p.amplitude, phase);
        if (p.kind == PathKind::Los)
            snap.los_bin = static_cast<std::size_t>(bin);
    }

    const double los_mag = std::abs(snap.taps[snap.los_bin]);
    double max_mag = 0.0;
    for (const auto &tap : snap.taps)
        max_mag = std::max(max_mag, std::abs(tap));
    // fully destructive bins leave rounding dust; report them as empty
    const double floor_mag = 1e-12 * max_mag;
    snap.power_db.resize(grid.n_bins);
    for (std::size_t i = 0; i < grid.n_bins; ++i) {
        const double mag = std::abs(snap.taps[i]);
        snap.power_db[i] = (mag > floor_mag && los_mag > 0.0)
                               ? 20.0 * std::log10(mag / los_mag)
                               : -std::numeric_limits<double>::infinity();
    }
    return snap;
}

ClassicalRicianParams classical_from_scene(const SceneState &scene, double carrier_hz) {
    ClassicalRicianParams params;
    params.doppler_hz = 0.0;
    params.arrival_angle_rad = 0.0;
    bool have_los = false;
    for (const auto &p : scene.paths) {
        if (p.kind == PathKind::Los) {
            params.c0 = p.amplitude;
            params.phi0_rad = path_phase(p.phase_offset_rad, carrier_hz, p.delay_s);
            have_los = true;
        } else if (is_specular(p.kind)) {
            params.scattered.emplace_back(p.amplitude,
                                          path_phase(p.phase_offset_rad, carrier_hz, p.delay_s));
        } else {
            params.scattered.emplace_back(p.amplitude, p.phase_offset_rad);
        }
    }
    if (!have_los)
        throw AnalysisError("classical_from_scene: scene has no direct path");
    return params;
}

void write_ir_csv(std::ostream &os, std::span<const IRSnapshot> snapshots) {
    os << "time_s,delay_ns,power_db\n";
    char buf[128];
    for (const auto &snap : snapshots) {
        for (std::size_t i = 0; i < snap.grid.n_bins; ++i) {
            if (snap.empty_bin(i))
                continue;
            std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", snap.t_s,
                          snap.grid.delay_at(i) * 1e9, snap.power_db[i]);
            os << buf;
        }
    }
}

} // namespace tempofade
