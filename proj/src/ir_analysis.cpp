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

#include "tempofade/ir_analysis.hpp"

#include "tempofade/errors.hpp"
#include "tempofade/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace tempofade {

const char *to_string(TrackLabel label) {
    switch (label) {
    case TrackLabel::Los:
        return "LOS";
    case TrackLabel::DynamicReflected:
        return "DynamicReflected";
    case TrackLabel::ConstantScattered:
        return "ConstantScattered";
    case TrackLabel::DynamicScattered:
        return "DynamicScattered";
    case TrackLabel::Unclassified:
        return "Unclassified";
    }
    return "?";
}

double PathTrack::mean_delay_ns() const { return mean(delays_ns); }
double PathTrack::delay_std_ns() const { return std::sqrt(variance(delays_ns)); }
double PathTrack::mean_power_db() const { return mean(powers_db); }
double PathTrack::power_std_db() const { return std::sqrt(variance(powers_db)); }

void IrOptions::validate() const {
    if (floor_db >= 0.0)
        throw ValidationError("ir.floor_db must be negative");
    if (!(gate_ns > 0.0))
        throw ValidationError("ir.gate_ns must be positive");
    if (max_missed < 0)
        throw ValidationError("ir.max_missed must be >= 0");
    if (!(los_delay_std_ns > 0.0) || !(power_std_db > 0.0))
        throw ValidationError("ir classification thresholds must be positive");
}

std::vector<Peak> detect_peaks(const PowerProfile &profile, double floor_db) {
    std::vector<Peak> peaks;
    const auto &p = profile.power_db;
    if (p.empty())
        return peaks;
    double global_max = -std::numeric_limits<double>::infinity();
    for (double v : p)
        global_max = std::max(global_max, v);
    if (!std::isfinite(global_max))
        return peaks;
    const double threshold = global_max + floor_db;

    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i]) || p[i] < threshold)
            continue;
        const double prev = i > 0 ? p[i - 1] : -std::numeric_limits<double>::infinity();
        const double next =
            i + 1 < p.size() ? p[i + 1] : -std::numeric_limits<double>::infinity();
        if (p[i] > prev && p[i] >= next)
            peaks.push_back({profile.delay_ns[i], p[i]});
    }
    return peaks;
}

std::vector<Peak> detect_peaks(const IRSnapshot &snapshot, double floor_db) {
    return detect_peaks(profile_from_snapshot(snapshot), floor_db);
}

PowerProfile profile_from_snapshot(const IRSnapshot &snapshot) {
    PowerProfile profile;
    profile.t_s = snapshot.t_s;
    profile.delay_ns.resize(snapshot.grid.n_bins);
    profile.power_db = snapshot.power_db;
    for (std::size_t i = 0; i < snapshot.grid.n_bins; ++i)
        profile.delay_ns[i] = snapshot.grid.delay_at(i) * 1e9;
    return profile;
}

std::vector<PathTrack> associate_tracks(std::span<const PowerProfile> profiles,
                                        const IrOptions &opts) {
    opts.validate();
    if (profiles.size() < 2)
        throw ValidationError("associate_tracks: need at least two snapshots");

    struct Active {
        PathTrack track;
        double last_delay = 0.0;
        int missed = 0;
    };
    std::vector<Active> active;
    std::vector<PathTrack> closed;
    int next_id = 0;

    for (std::size_t snap = 0; snap < profiles.size(); ++snap) {
        const auto peaks = detect_peaks(profiles[snap], opts.floor_db);

        // candidate (track, peak) pairs inside the gate, nearest first
        struct Cand {
            double dist;
            std::size_t track;
            std::size_t peak;
        };
        std::vector<Cand> cands;
        for (std::size_t a = 0; a < active.size(); ++a)
            for (std::size_t k = 0; k < peaks.size(); ++k) {
                const double d = std::abs(peaks[k].delay_ns - active[a].last_delay);
                if (d <= opts.gate_ns)
                    cands.push_back({d, a, k});
            }
        std::sort(cands.begin(), cands.end(), [](const Cand &x, const Cand &y) {
            if (x.dist != y.dist)
                return x.dist < y.dist;
            if (x.track != y.track)
                return x.track < y.track;
            return x.peak < y.peak;
        });

        std::vector<bool> track_used(active.size(), false);
        std::vector<bool> peak_used(peaks.size(), false);
        for (const auto &c : cands) {
            if (track_used[c.track] || peak_used[c.peak])
                continue;
            track_used[c.track] = true;
            peak_used[c.peak] = true;
            Active &a = active[c.track];
            a.track.snap_indices.push_back(snap);
            a.track.times_s.push_back(profiles[snap].t_s);
            a.track.delays_ns.push_back(peaks[c.peak].delay_ns);
            a.track.powers_db.push_back(peaks[c.peak].power_db);
            a.last_delay = peaks[c.peak].delay_ns;
            a.missed = 0;
        }

        // age out unmatched tracks
        for (std::size_t a = active.size(); a-- > 0;) {
            if (track_used[a])
                continue;
            if (++active[a].missed > opts.max_missed) {
                closed.push_back(std::move(active[a].track));
                active.erase(active.begin() + static_cast<std::ptrdiff_t>(a));
            }
        }

        // open new tracks for leftover peaks, in delay order
        for (std::size_t k = 0; k < peaks.size(); ++k) {
            if (peak_used[k])
                continue;
            Active a;
            a.track.track_id = next_id++;
            a.track.snap_indices.push_back(snap);
            a.track.times_s.push_back(profiles[snap].t_s);
            a.track.delays_ns.push_back(peaks[k].delay_ns);
            a.track.powers_db.push_back(peaks[k].power_db);
            a.last_delay = peaks[k].delay_ns;
            active.push_back(std::move(a));
        }
    }

    for (auto &a : active)
        closed.push_back(std::move(a.track));
    std::sort(closed.begin(), closed.end(),
              [](const PathTrack &x, const PathTrack &y) { return x.track_id < y.track_id; });
    return closed;
}

namespace {

/// Pearson correlation of two tracks' powers over their common snapshots.
std::optional<double> power_correlation(const PathTrack &a, const PathTrack &b,
                                        std::size_t min_overlap) {
    std::vector<double> pa, pb;
    std::size_t i = 0, j = 0;
    while (i < a.snap_indices.size() && j < b.snap_indices.size()) {
        if (a.snap_indices[i] == b.snap_indices[j]) {
            pa.push_back(a.powers_db[i]);
            pb.push_back(b.powers_db[j]);
            ++i;
            ++j;
        } else if (a.snap_indices[i] < b.snap_indices[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    if (pa.size() < min_overlap)
        return std::nullopt;
    return pearson_correlation(pa, pb);
}

} // namespace

void classify_tracks(std::vector<PathTrack> &tracks, const IrOptions &opts,
                     const PathTrack *reference) {
    opts.validate();
    if (tracks.empty())
        throw ValidationError("classify_tracks: no tracks");

    for (auto &t : tracks)
        t.label = TrackLabel::Unclassified;

    // the direct path must be the earliest arrival and delay-stable
    std::size_t min_idx = 0;
    for (std::size_t i = 1; i < tracks.size(); ++i)
        if (tracks[i].mean_delay_ns() < tracks[min_idx].mean_delay_ns())
            min_idx = i;
    if (tracks[min_idx].delay_std_ns() >= opts.los_delay_std_ns)
        throw AnalysisError("classify_tracks: minimum-delay track is not delay-stable (std " +
                            std::to_string(tracks[min_idx].delay_std_ns()) +
                            " ns); no direct path identified");
    tracks[min_idx].label = TrackLabel::Los;

    for (auto &t : tracks) {
        if (t.label == TrackLabel::Los)
            continue;
        if (t.delay_std_ns() >= opts.los_delay_std_ns)
            t.label = t.power_std_db() >= opts.power_std_db ? TrackLabel::DynamicReflected
                                                            : TrackLabel::Unclassified;
    }

    if (!reference) {
        double best_power = -std::numeric_limits<double>::infinity();
        for (const auto &t : tracks) {
            if (t.label == TrackLabel::DynamicReflected && t.mean_power_db() > best_power) {
                best_power = t.mean_power_db();
                reference = &t;
            }
        }
    }

    for (auto &t : tracks) {
        if (t.label != TrackLabel::Unclassified || t.delay_std_ns() >= opts.los_delay_std_ns)
            continue;
        if (reference) {
            const auto corr = power_correlation(t, *reference, opts.min_overlap);
            if (corr && std::abs(*corr) > opts.corr_threshold) {
                t.label = TrackLabel::DynamicScattered;
                continue;
            }
        }
        if (t.power_std_db() < opts.power_std_db)
            t.label = TrackLabel::ConstantScattered;
    }
}

IrRunResult analyze_ir_run(const Scenario &sc, double cadence_s, const IrOptions &opts) {
    sc.validate();
    opts.validate();
    if (!(cadence_s > 0.0))
        throw ValidationError("analyze_ir_run: cadence_s must be positive");

    const std::size_t n_snaps =
        static_cast<std::size_t>(std::floor(sc.duration_s / cadence_s)) + 1;
    if (n_snaps < 2)
        throw ValidationError("analyze_ir_run: scenario too short for two snapshots");

    // size the grid to the worst-case delay over the run
    double max_delay = 0.0;
    for (std::size_t i = 0; i < n_snaps; ++i) {
        const SceneState scene = resolve_scene(sc, static_cast<double>(i) * cadence_s);
        for (const auto &p : scene.paths)
            max_delay = std::max(max_delay, p.delay_s);
    }
    DelayGrid grid;
    grid.start_s = 0.0;
    grid.resolution_s = 1e-9;
    grid.n_bins = static_cast<std::size_t>(std::ceil(max_delay / grid.resolution_s)) + 6;

    IrRunResult result;
    result.snapshots.reserve(n_snaps);
    std::vector<PowerProfile> profiles;
    profiles.reserve(n_snaps);
    for (std::size_t i = 0; i < n_snaps; ++i) {
        const SceneState scene = resolve_scene(sc, static_cast<double>(i) * cadence_s);
        result.snapshots.push_back(impulse_response(scene, sc.carrier_hz, grid));
        profiles.push_back(profile_from_snapshot(result.snapshots.back()));
    }

    result.tracks = associate_tracks(profiles, opts);
    classify_tracks(result.tracks, opts);
    return result;
}

std::vector<PowerProfile> read_ir_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open snapshot CSV: " + path.string());

    std::vector<PowerProfile> profiles;
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](const std::string &what) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };

    if (!std::getline(in, line))
        throw IoError(path.string() + ": empty file");
    line_no = 1;
    if (line != "time_s,delay_ns,power_db")
        fail("expected header 'time_s,delay_ns,power_db'");

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        double t = 0.0, delay = 0.0, power = 0.0;
        char c1 = 0, c2 = 0;
        if (!(ss >> t >> c1 >> delay >> c2 >> power) || c1 != ',' || c2 != ',')
            fail("expected 3 comma-separated numeric columns");
        std::string rest;
        if (ss >> rest)
            fail("trailing content after 3 columns");
        if (profiles.empty() || profiles.back().t_s != t) {
            if (!profiles.empty() && t < profiles.back().t_s)
                fail("snapshot times must be non-decreasing");
            profiles.push_back(PowerProfile{t, {}, {}});
        }
        auto &prof = profiles.back();
        if (!prof.delay_ns.empty() && delay <= prof.delay_ns.back())
            fail("delays must be strictly increasing within a snapshot");
        prof.delay_ns.push_back(delay);
        prof.power_db.push_back(power);
    }
    return profiles;
}

void write_path_tracks_csv(std::ostream &os, std::span<const PathTrack> tracks) {
    os << "track_id,time_s,delay_ns,power_db,label\n";
    char buf[160];
    for (const auto &t : tracks) {
        for (std::size_t i = 0; i < t.length(); ++i) {
            std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%s\n", t.track_id, t.times_s[i],
                          t.delays_ns[i], t.powers_db[i], to_string(t.label));
            os << buf;
        }
    }
}

} // namespace tempofade
