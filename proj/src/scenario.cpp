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

#include "tempofade/scenario.hpp"

#include "tempofade/channel.hpp"
#include "tempofade/errors.hpp"
#include "tempofade/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace tempofade {

void MovingObject::validate() const {
    if (waypoints.empty())
        throw ValidationError("object '" + id + "': waypoints must contain at least one entry");
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        if (!(waypoints[i].t_s > waypoints[i - 1].t_s))
            throw ValidationError("object '" + id + "': waypoint times must be strictly increasing");
    if (reflection_coefficient < 0.0 || reflection_coefficient > 1.0)
        throw ValidationError("object '" + id + "': reflection_coefficient must be in [0, 1]");
}

void Scenario::validate() const {
    if (tx_pos == rx_pos)
        throw ValidationError("scenario.tx_pos and scenario.rx_pos must differ");
    if (!(carrier_hz > 0.0))
        throw ValidationError("scenario.carrier_hz must be positive");
    if (!(duration_s > 0.0))
        throw ValidationError("scenario.duration_s must be positive");
    if (coupling_ratio < 0.0 || coupling_ratio >= 1.0)
        throw ValidationError("scenario.coupling_ratio must be in [0, 1)");
    if (n_const_scattered < 0)
        throw ValidationError("scenario.n_const_scattered must be >= 0");
    if (n_dyn_scattered_per_object < 0)
        throw ValidationError("scenario.n_dyn_scattered_per_object must be >= 0");
    if (const_scattered_power_fraction < 0.0)
        throw ValidationError("scenario.const_scattered_power_fraction must be >= 0");
    if (scattered_delay_offset_ns < 0.0)
        throw ValidationError("scenario.scattered_delay_offset_ns must be >= 0");
    if (scattered_delay_spread_ns <= 0.0)
        throw ValidationError("scenario.scattered_delay_spread_ns must be positive");
    for (const auto &obj : objects)
        obj.validate();
}

const char *to_string(PathKind k) {
    switch (k) {
    case PathKind::Los:
        return "LOS";
    case PathKind::DynamicReflected:
        return "DynamicReflected";
    case PathKind::ConstantScattered:
        return "ConstantScattered";
    case PathKind::DynamicScattered:
        return "DynamicScattered";
    }
    return "?";
}

const PathState &SceneState::los() const {
    for (const auto &p : paths)
        if (p.kind == PathKind::Los)
            return p;
    throw AnalysisError("scene has no direct path");
}

Vec3 object_position(const MovingObject &obj, double t_s) {
    if (obj.waypoints.empty())
        throw ValidationError("object '" + obj.id + "': waypoints must contain at least one entry");
    const auto &wp = obj.waypoints;
    if (t_s <= wp.front().t_s)
        return wp.front().pos;
    if (t_s >= wp.back().t_s)
        return wp.back().pos;
    // bracketing segment
    std::size_t hi = 1;
    while (wp[hi].t_s < t_s)
        ++hi;
    const auto &a = wp[hi - 1];
    const auto &b = wp[hi];
    const double f = (t_s - a.t_s) / (b.t_s - a.t_s);
    return a.pos + f * (b.pos - a.pos);
}

PathState reflected_path(const Vec3 &tx, const Vec3 &rx, const Vec3 &obj_pos, double gamma,
                         double phase_offset_rad) {
    const double d1 = distance(tx, obj_pos);
    const double d2 = distance(obj_pos, rx);
    if (d1 == 0.0 || d2 == 0.0)
        throw ValidationError("reflector position coincides with a link endpoint");
    const double d_bounce = d1 + d2;
    const double d_direct = distance(tx, rx);
    PathState p;
    p.kind = PathKind::DynamicReflected;
    p.amplitude = gamma * d_direct / d_bounce;
    p.phase_offset_rad = phase_offset_rad;
    p.delay_s = d_bounce / speed_of_light_mps;
    return p;
}

SceneState resolve_scene(const Scenario &sc, double t_s) {
    sc.validate();
    if (t_s < 0.0 || t_s > sc.duration_s)
        throw std::out_of_range("resolve_scene: t outside [0, duration_s]");

    // All static draws come from one stream in a fixed order, so the realized
    // path set is a pure function of (scenario, t).
    Rng rng(sc.seed);

    SceneState scene;
    scene.t_s = t_s;
    const double tau_los = distance(sc.tx_pos, sc.rx_pos) / speed_of_light_mps;

    PathState los;
    los.kind = PathKind::Los;
    los.amplitude = 1.0;
    los.phase_offset_rad = rng.angle();
    los.delay_s = tau_los;
    scene.paths.push_back(los);

    for (const auto &obj : sc.objects) {
        const double phase = rng.angle();
        PathState p = reflected_path(sc.tx_pos, sc.rx_pos, object_position(obj, t_s),
                                     obj.reflection_coefficient, phase);
        p.parent_object = obj.id;
        scene.paths.push_back(p);
    }

    // Instantaneous specular magnitude; moving-object scattered paths below
    // scale with it at the (much lower) coupling ratio.
    std::complex<double> spec_sum = 0.0;
    for (const auto &p : scene.paths)
        spec_sum += std::polar(p.amplitude, path_phase(p.phase_offset_rad, sc.carrier_hz, p.delay_s));
    const double spec_mag = std::abs(spec_sum);

    const double offset_s = sc.scattered_delay_offset_ns * 1e-9;
    const double spread_s = sc.scattered_delay_spread_ns * 1e-9;

    if (sc.n_const_scattered > 0) {
        std::vector<PathState> consts(static_cast<std::size_t>(sc.n_const_scattered));
        double raw_power = 0.0;
        for (auto &p : consts) {
            p.kind = PathKind::ConstantScattered;
            p.amplitude = rng.uniform(); // rescaled below
            p.phase_offset_rad = rng.angle();
            p.delay_s = tau_los + offset_s + rng.uniform(0.0, spread_s);
            raw_power += p.amplitude * p.amplitude;
        }
        // normalize the population to the configured total power (direct path
        // power is 1 by construction)
        const double scale =
            raw_power > 0.0 ? std::sqrt(sc.const_scattered_power_fraction / raw_power) : 0.0;
        for (auto &p : consts) {
            p.amplitude *= scale;
            scene.paths.push_back(p);
        }
    }

    for (std::size_t i = 0; i < sc.objects.size(); ++i) {
        // static delays, anchored where the parent reflection starts out
        const Vec3 start_pos = object_position(sc.objects[i], 0.0);
        const double parent_delay0 =
            (distance(sc.tx_pos, start_pos) + distance(start_pos, sc.rx_pos)) /
            speed_of_light_mps;
        for (int k = 0; k < sc.n_dyn_scattered_per_object; ++k) {
            PathState p;
            p.kind = PathKind::DynamicScattered;
            const double u = rng.uniform();
            p.amplitude = sc.coupling_ratio * u * spec_mag;
            p.phase_offset_rad = rng.angle();
            p.delay_s = parent_delay0 + offset_s + rng.uniform(0.0, spread_s);
            p.parent_object = sc.objects[i].id;
            scene.paths.push_back(p);
        }
    }

    return scene;
}

Scenario default_vehicle_scenario(double carrier_hz) {
    Scenario sc;
    sc.name = "rolling-mill-vehicle";
    sc.tx_pos = {0.0, 1.0, 1.0};
    sc.rx_pos = {12.0, 1.0, 1.0};
    sc.carrier_hz = carrier_hz;
    sc.duration_s = 60.0;
    sc.seed = 1;

    MovingObject vehicle;
    vehicle.id = "vehicle-1";
    vehicle.kind = MovingObject::Kind::Vehicle;
    vehicle.reflection_coefficient = 0.8;
    // radial pass: the bounce distance sweeps 12.6 -> 20 m, so the reflection
    // varies strongly in both amplitude (~4 dB) and delay (~25 ns); asymmetric
    // legs give the delay series the full 30 s loop period
    const Vec3 a{6.0, 3.0, 1.0};
    const Vec3 b{6.0, 9.0, 1.0};
    for (double t0 = 0.0; t0 < sc.duration_s; t0 += 30.0) {
        vehicle.waypoints.push_back({t0, a});
        vehicle.waypoints.push_back({t0 + 12.0, b});
    }
    vehicle.waypoints.push_back({sc.duration_s, a});
    sc.objects.push_back(vehicle);
    return sc;
}

Scenario humans_scenario(int n_humans, double duration_s, std::uint64_t seed) {
    if (n_humans < 1)
        throw ValidationError("humans_scenario: n_humans must be >= 1");
    Scenario sc;
    sc.name = "lab-humans-" + std::to_string(n_humans);
    sc.tx_pos = {0.0, 1.0, 1.0};
    sc.rx_pos = {12.0, 1.0, 1.0};
    sc.carrier_hz = 915e6;
    sc.duration_s = duration_s;
    sc.seed = seed;

    const double walk_speed = 1.2; // m/s
    for (int i = 0; i < n_humans; ++i) {
        MovingObject person;
        person.id = "human-" + std::to_string(i + 1);
        person.kind = MovingObject::Kind::Human;
        person.reflection_coefficient = 0.3;
        Rng walk(derive_seed(seed, 100 + static_cast<std::uint64_t>(i)));
        Vec3 pos{walk.uniform(2.0, 10.0), walk.uniform(2.0, 8.0), 1.0};
        double t = 0.0;
        person.waypoints.push_back({t, pos});
        while (t < duration_s) {
            const Vec3 target{walk.uniform(1.0, 11.0), walk.uniform(2.0, 8.0), 1.0};
            const double hop = distance(pos, target);
            t += std::max(hop / walk_speed, 0.5);
            pos = target;
            person.waypoints.push_back({t, pos});
        }
        sc.objects.push_back(person);
    }
    return sc;
}

} // namespace tempofade
