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

#include "tempofade/channel.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace tempofade {

/// Power-vs-delay view of one observation instant. May be sparse (only
/// occupied delay positions), e.g. when loaded from CSV.
struct PowerProfile {
    double t_s = 0.0;
    std::vector<double> delay_ns;
    std::vector<double> power_db;
};

struct Peak {
    double delay_ns = 0.0;
    double power_db = 0.0;
};

enum class TrackLabel { Los, DynamicReflected, ConstantScattered, DynamicScattered, Unclassified };

const char *to_string(TrackLabel label);

/// One delay peak followed across snapshots.
struct PathTrack {
    int track_id = 0;
    std::vector<std::size_t> snap_indices;
    std::vector<double> times_s;
    std::vector<double> delays_ns;
    std::vector<double> powers_db;
    TrackLabel label = TrackLabel::Unclassified;

    std::size_t length() const { return times_s.size(); }
    double mean_delay_ns() const;
    double delay_std_ns() const;
    double mean_power_db() const;
    double power_std_db() const;
};

struct IrOptions {
    double floor_db = -30.0;      // peak acceptance relative to the snapshot maximum
    double gate_ns = 2.0;         // association gate
    int max_missed = 3;           // snapshots a track may skip before closing
    double los_delay_std_ns = 0.5;
    double power_std_db = 1.0;
    double corr_threshold = 0.5;
    std::size_t min_overlap = 3;  // samples needed for the power correlation

    void validate() const;
};

/// Local power maxima within floor_db of the snapshot maximum.
std::vector<Peak> detect_peaks(const PowerProfile &profile, double floor_db = -30.0);
std::vector<Peak> detect_peaks(const IRSnapshot &snapshot, double floor_db = -30.0);

PowerProfile profile_from_snapshot(const IRSnapshot &snapshot);

/// Greedy nearest-delay association across snapshots. Unmatched peaks open new
/// tracks; a track missing more than max_missed consecutive snapshots closes.
std::vector<PathTrack> associate_tracks(std::span<const PowerProfile> profiles,
                                        const IrOptions &opts = {});

/// Labels tracks: the stable track with the globally smallest mean delay is
/// the direct path; delay-varying tracks with varying power are reflections
/// off moving objects; stable-delay tracks are split by power correlation
/// against the reference reflection (strongest one by default) into
/// moving-rooted and constant scattered paths. Throws AnalysisError when the
/// minimum-delay track is not delay-stable.
void classify_tracks(std::vector<PathTrack> &tracks, const IrOptions &opts = {},
                     const PathTrack *reference = nullptr);

struct IrRunResult {
    std::vector<IRSnapshot> snapshots;
    std::vector<PathTrack> tracks;
};

/// Snapshot generation at a fixed cadence plus detection, association and
/// classification, end to end.
IrRunResult analyze_ir_run(const Scenario &sc, double cadence_s = 0.2,
                           const IrOptions &opts = {});

/// Reads the long-format snapshot CSV (time_s, delay_ns, power_db). Parse
/// errors carry the 1-based line number.
std::vector<PowerProfile> read_ir_csv(const std::filesystem::path &path);

void write_path_tracks_csv(std::ostream &os, std::span<const PathTrack> tracks);

} // namespace tempofade
