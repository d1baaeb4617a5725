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

#include "tempofade/scenario.hpp"

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace tempofade {

using ComplexGain = std::complex<double>;

/// Parameters of the classical LOS + stationary-scatter model
///   h(t) = c0 * exp(i (2 pi f_D cos(theta) t + phi0)) + sum_n C_n exp(i phi_n)
/// The scattered sum is time-constant by construction.
struct ClassicalRicianParams {
    double c0 = 1.0;
    double doppler_hz = 0.0;
    double arrival_angle_rad = 0.0;
    double phi0_rad = 0.0;
    std::vector<std::pair<double, double>> scattered; // (C_n, phi_n)
};

/// Uniform delay grid for impulse-response snapshots.
struct DelayGrid {
    double start_s = 0.0;
    double resolution_s = 1e-9;
    std::size_t n_bins = 128;

    double delay_at(std::size_t i) const { return start_s + static_cast<double>(i) * resolution_s; }
};

/// Power-vs-delay at one instant. Taps are raw accumulated phasors; power is
/// in dB relative to the direct-path bin. Empty bins carry -inf power.
struct IRSnapshot {
    double t_s = 0.0;
    DelayGrid grid;
    std::vector<ComplexGain> taps;
    std::vector<double> power_db;
    std::size_t los_bin = 0;

    bool empty_bin(std::size_t i) const;
};

/// Per-path carrier phase for a fixed link: phi - 2 pi f_c tau, wrapped to [0, 2*pi).
double path_phase(double phi_rad, double carrier_hz, double delay_s);

ComplexGain eval_classical(const ClassicalRicianParams &p, double t_s);

/// Complex baseband gain of a resolved scene. Direct and reflected paths take
/// the delay-dependent carrier phase; scattered paths contribute with their
/// stationary uniform phase offsets only.
ComplexGain eval_temporal(const SceneState &scene, double carrier_hz);

struct SpecularScattered {
    double s_inst = 0.0;     // |coherent sum of direct + reflected phasors|
    double sigma_inst = 0.0; // sqrt(half the total scattered power)
};

SpecularScattered specular_scattered_power(const SceneState &scene, double carrier_hz);

/// Coherent sum over the direct and reflected paths only.
ComplexGain specular_gain(const SceneState &scene, double carrier_hz);

/// Accumulates each path's phasor into the nearest delay bin. Throws
/// AnalysisError naming the path if a delay falls outside the grid.
IRSnapshot impulse_response(const SceneState &scene, double carrier_hz, const DelayGrid &grid);

/// Maps a frozen scene onto classical parameters: the direct path becomes the
/// coherent term (f_D = 0) and every other path joins the scattered list with
/// its effective phase. eval_classical of the result equals eval_temporal of
/// the scene at any t.
ClassicalRicianParams classical_from_scene(const SceneState &scene, double carrier_hz);

/// Long-format CSV export (time_s, delay_ns, power_db), 9 significant digits,
/// empty bins skipped.
void write_ir_csv(std::ostream &os, std::span<const IRSnapshot> snapshots);

} // namespace tempofade
