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

#pragma once

#include "tempofade/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tempofade {

struct Waypoint {
    double t_s = 0.0;
    Vec3 pos;
};

/// A reflector moving along a piecewise-linear trajectory. Positions are
/// clamped to the first/last waypoint outside the covered time span.
struct MovingObject {
    enum class Kind { Vehicle, Human };

    std::string id;
    Kind kind = Kind::Vehicle;
    double reflection_coefficient = 0.8; // in [0, 1]
    std::vector<Waypoint> waypoints;     // times strictly increasing, >= 1 entry

    void validate() const;
};

/// Full link + environment description. Immutable once constructed; every
/// random quantity of the realized path set derives from `seed` alone.
struct Scenario {
    std::string name = "unnamed";
    Vec3 tx_pos;
    Vec3 rx_pos;
    double carrier_hz = 915e6;
    double duration_s = 60.0;
    std::vector<MovingObject> objects;

    /// Weak static paths rooted in the direct path.
    int n_const_scattered = 16;
    /// Weak paths rooted in each moving object's reflection.
    int n_dyn_scattered_per_object = 8;
    /// Amplitude fraction linking moving-object scattered paths to the
    /// instantaneous specular magnitude. 0 disables them.
    double coupling_ratio = 0.1;
    /// Total power of the constant scattered population relative to the
    /// direct path (linear, default -20 dB).
    double const_scattered_power_fraction = 0.01;
    /// Scattered paths sit this far beyond their anchor path, plus a random
    /// excess within the spread window (both ns). The offset keeps the static
    /// scatter clutter clear of the moving reflection's delay corridor.
    double scattered_delay_offset_ns = 30.0;
    double scattered_delay_spread_ns = 40.0;

    std::uint64_t seed = 1;

    void validate() const;
};

enum class PathKind { Los, DynamicReflected, ConstantScattered, DynamicScattered };

const char *to_string(PathKind k);

/// One propagation path at one instant. Amplitudes are linear voltage gains
/// relative to the direct path (direct path amplitude is exactly 1).
struct PathState {
    PathKind kind = PathKind::Los;
    double amplitude = 0.0;
    double phase_offset_rad = 0.0; // in [0, 2*pi), drawn once per path
    double delay_s = 0.0;
    std::string parent_object; // empty for Los / ConstantScattered

    friend bool operator==(const PathState &, const PathState &) = default;
};

/// The resolved path set at time t. Deterministic in (Scenario, t); the path
/// count and ordering are fixed over t for a given scenario.
struct SceneState {
    double t_s = 0.0;
    std::vector<PathState> paths;

    const PathState &los() const;

    friend bool operator==(const SceneState &, const SceneState &) = default;
};

/// Piecewise-linear trajectory interpolation, exact at waypoints, clamped
/// outside the span.
Vec3 object_position(const MovingObject &obj, double t_s);

/// Single-bounce reflection geometry: delay over tx -> obj -> rx, amplitude
/// gamma * d_direct / d_bounce.
PathState reflected_path(const Vec3 &tx, const Vec3 &rx, const Vec3 &obj_pos, double gamma,
                         double phase_offset_rad);

SceneState resolve_scene(const Scenario &sc, double t_s);

/// Canned scenario: 12 m industrial link at 915 MHz with one slow vehicle
/// looping between two stations (asymmetric 12 s / 18 s legs, 30 s period).
Scenario default_vehicle_scenario(double carrier_hz = 915e6);

/// Canned scenario: n walking people on pseudo-random piecewise-linear
/// trajectories near the link.
Scenario humans_scenario(int n_humans, double duration_s = 20.0, std::uint64_t seed = 1);

} // namespace tempofade
