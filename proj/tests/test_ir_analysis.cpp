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

#include "tempofade/errors.hpp"
#include "tempofade/ir_analysis.hpp"
#include "tempofade/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace tempofade;
namespace fs = std::filesystem;

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// dense profile on a 0.5 ns grid (taps snap to the nearest half nanosecond)
PowerProfile profile_at(double t, const std::vector<std::pair<double, double>> &taps,
                        std::size_t n_bins = 128) {
    PowerProfile p;
    p.t_s = t;
    p.delay_ns.resize(n_bins);
    p.power_db.assign(n_bins, neg_inf);
    for (std::size_t i = 0; i < n_bins; ++i)
        p.delay_ns[i] = 0.5 * static_cast<double>(i);
    for (const auto &[delay, power] : taps) {
        const auto bin = static_cast<std::size_t>(std::lround(2.0 * delay));
        p.power_db[bin] = power;
    }
    return p;
}

/// The four-path scripted scene: direct at 15 ns, an oscillating reflection
/// around 17 ns, one scattered path shadowing the reflection's power and one
/// flat scattered path.
std::vector<PowerProfile> scripted_scene(int n_snaps, double power_offset_db = 0.0) {
    std::vector<PowerProfile> profiles;
    for (int k = 0; k < n_snaps; ++k) {
        const double t = 0.2 * k;
        const double swing = std::sin(0.35 * k);
        const double refl_delay = 17.0 + swing;           // +-1 ns
        const double refl_power = -1.0 + 2.5 * swing;     // std > 1 dB
        profiles.push_back(profile_at(
            t, {{15.0, 0.0 + power_offset_db},
                {refl_delay, refl_power + power_offset_db},
                {25.0, -12.0 + 1.2 * swing + power_offset_db}, // co-varying scatter
                {33.0, -14.0 + power_offset_db}}));            // constant scatter
    }
    return profiles;
}

std::map<TrackLabel, int> label_counts(const std::vector<PathTrack> &tracks) {
    std::map<TrackLabel, int> counts;
    for (const auto &t : tracks)
        ++counts[t.label];
    return counts;
}

} // namespace

TEST_CASE("detect_peaks") {
    SUBCASE("single tap") {
        const auto peaks = detect_peaks(profile_at(0.0, {{15.0, 0.0}}));
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0].delay_ns == 15.0);
        CHECK(peaks[0].power_db == 0.0);
    }
    SUBCASE("two taps 10 dB apart are both kept") {
        const auto peaks = detect_peaks(profile_at(0.0, {{15.0, 0.0}, {20.0, -10.0}}));
        CHECK(peaks.size() == 2);
    }
    SUBCASE("a tap below the floor is dropped") {
        const auto peaks = detect_peaks(profile_at(0.0, {{15.0, 0.0}, {20.0, -35.0}}));
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0].delay_ns == 15.0);
    }
    SUBCASE("adjacent-bin shoulder is not a second peak") {
        const auto peaks = detect_peaks(profile_at(0.0, {{15.0, 0.0}, {15.5, -3.0}}));
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0].delay_ns == 15.0);
    }
}

TEST_CASE("associate_tracks") {
    SUBCASE("static peak forms one full-length track") {
        std::vector<PowerProfile> profiles;
        for (int k = 0; k < 100; ++k)
            profiles.push_back(profile_at(0.2 * k, {{15.0, 0.0}}));
        const auto tracks = associate_tracks(profiles);
        REQUIRE(tracks.size() == 1);
        CHECK(tracks[0].length() == 100);
    }
    SUBCASE("slow drift stays one track") {
        std::vector<PowerProfile> profiles;
        for (int k = 0; k < 60; ++k)
            profiles.push_back(profile_at(0.2 * k, {{15.0 + 0.5 * k, 0.0}}));
        const auto tracks = associate_tracks(profiles);
        REQUIRE(tracks.size() == 1);
        CHECK(tracks[0].length() == 60);
        CHECK(tracks[0].delays_ns.front() == 15.0);
        CHECK(tracks[0].delays_ns.back() == doctest::Approx(15.0 + 0.5 * 59).epsilon(0.02));
    }
    SUBCASE("two crossing peaks remain two tracks") {
        std::vector<PowerProfile> profiles;
        for (int k = 0; k < 22; ++k)
            profiles.push_back(
                profile_at(0.2 * k, {{10.0 + 1.9 * k, 0.0}, {50.0 - 1.9 * k, -3.0}}));
        const auto tracks = associate_tracks(profiles);
        REQUIRE(tracks.size() == 2);
        CHECK(tracks[0].length() == 22);
        CHECK(tracks[1].length() == 22);
    }
    SUBCASE("a gap longer than max_missed closes the track") {
        std::vector<PowerProfile> profiles;
        for (int k = 0; k < 10; ++k)
            profiles.push_back(profile_at(0.2 * k, {{15.0, 0.0}}));
        for (int k = 10; k < 15; ++k)
            profiles.push_back(profile_at(0.2 * k, {{40.0, 0.0}}));
        for (int k = 15; k < 25; ++k)
            profiles.push_back(profile_at(0.2 * k, {{15.0, 0.0}, {40.0, -1.0}}));
        const auto tracks = associate_tracks(profiles);
        CHECK(tracks.size() == 3); // 15 ns track closed and reopened
    }
}

TEST_CASE("classify_tracks recovers the scripted four-path taxonomy") {
    auto tracks = associate_tracks(scripted_scene(60));
    classify_tracks(tracks);
    REQUIRE(tracks.size() == 4);

    const auto counts = label_counts(tracks);
    CHECK(counts.at(TrackLabel::Los) == 1);
    CHECK(counts.at(TrackLabel::DynamicReflected) == 1);
    CHECK(counts.at(TrackLabel::DynamicScattered) == 1);
    CHECK(counts.at(TrackLabel::ConstantScattered) == 1);

    for (const auto &t : tracks) {
        if (t.label == TrackLabel::Los)
            CHECK(t.mean_delay_ns() == doctest::Approx(15.0));
        if (t.label == TrackLabel::DynamicReflected)
            CHECK(t.mean_delay_ns() == doctest::Approx(17.0).epsilon(0.1));
        if (t.label == TrackLabel::DynamicScattered)
            CHECK(t.mean_delay_ns() == doctest::Approx(25.0));
        if (t.label == TrackLabel::ConstantScattered)
            CHECK(t.mean_delay_ns() == doctest::Approx(33.0));
    }
}

TEST_CASE("classify_tracks accepts an explicit reference track") {
    auto tracks = associate_tracks(scripted_scene(60));
    // hand the reflection in as the reference instead of letting the
    // classifier pick it
    const PathTrack *reflection = nullptr;
    for (const auto &t : tracks)
        if (std::abs(t.mean_delay_ns() - 17.0) < 1.5)
            reflection = &t;
    REQUIRE(reflection != nullptr);
    classify_tracks(tracks, IrOptions{}, reflection);
    const auto counts = label_counts(tracks);
    CHECK(counts.at(TrackLabel::DynamicScattered) == 1);
    CHECK(counts.at(TrackLabel::ConstantScattered) == 1);
}

TEST_CASE("classification is invariant to a uniform power offset") {
    auto base = associate_tracks(scripted_scene(60));
    classify_tracks(base);
    auto shifted = associate_tracks(scripted_scene(60, 7.0));
    classify_tracks(shifted);
    REQUIRE(base.size() == shifted.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(base[i].label == shifted[i].label);
}

TEST_CASE("classify_tracks edge cases") {
    SUBCASE("single constant track is the direct path") {
        std::vector<PowerProfile> profiles;
        for (int k = 0; k < 20; ++k)
            profiles.push_back(profile_at(0.2 * k, {{15.0, 0.0}}));
        auto tracks = associate_tracks(profiles);
        classify_tracks(tracks);
        REQUIRE(tracks.size() == 1);
        CHECK(tracks[0].label == TrackLabel::Los);
    }
    SUBCASE("all-constant scene: direct plus constant scatter only") {
        std::vector<PowerProfile> profiles;
        for (int k = 0; k < 20; ++k)
            profiles.push_back(profile_at(0.2 * k, {{15.0, 0.0}, {22.0, -8.0}, {30.0, -12.0}}));
        auto tracks = associate_tracks(profiles);
        classify_tracks(tracks);
        const auto counts = label_counts(tracks);
        CHECK(counts.at(TrackLabel::Los) == 1);
        CHECK(counts.at(TrackLabel::ConstantScattered) == 2);
    }
    SUBCASE("an unstable minimum-delay track has no direct path") {
        std::vector<PowerProfile> profiles;
        for (int k = 0; k < 20; ++k)
            profiles.push_back(profile_at(0.2 * k, {{15.0 + 1.8 * std::sin(0.9 * k), 0.0}}));
        auto tracks = associate_tracks(profiles);
        CHECK_THROWS_WITH_AS(classify_tracks(tracks), doctest::Contains("no direct path"),
                             AnalysisError);
    }
}

TEST_CASE("analyze_ir_run on canned scenarios") {
    SUBCASE("no moving objects: direct path and constant scatter only") {
        Scenario sc;
        sc.tx_pos = {0, 1, 1};
        sc.rx_pos = {12, 1, 1};
        sc.duration_s = 4.0;
        sc.n_const_scattered = 6;
        sc.seed = 31;
        const IrRunResult run = analyze_ir_run(sc, 0.2);
        const auto counts = label_counts(run.tracks);
        CHECK(counts.at(TrackLabel::Los) == 1);
        CHECK(counts.count(TrackLabel::DynamicReflected) == 0);
        CHECK(counts.count(TrackLabel::DynamicScattered) == 0);
    }
    SUBCASE("default scenario: the reflection is found and its delay moves") {
        Scenario sc = default_vehicle_scenario();
        sc.duration_s = 12.0;
        const IrRunResult run = analyze_ir_run(sc, 0.2);
        int n_reflected = 0;
        for (const auto &t : run.tracks)
            if (t.label == TrackLabel::DynamicReflected) {
                ++n_reflected;
                CHECK(t.delay_std_ns() >= 0.5);
            }
        CHECK(n_reflected >= 1);
        const auto counts = label_counts(run.tracks);
        CHECK(counts.at(TrackLabel::Los) == 1);
    }
    SUBCASE("zero coupling yields zero moving-rooted scatter labels") {
        Scenario sc = default_vehicle_scenario();
        sc.duration_s = 12.0;
        sc.coupling_ratio = 0.0;
        sc.n_dyn_scattered_per_object = 0;
        const IrRunResult run = analyze_ir_run(sc, 0.2);
        CHECK(label_counts(run.tracks).count(TrackLabel::DynamicScattered) == 0);
    }
}

TEST_CASE("snapshot CSV round trip") {
    const Scenario sc = default_vehicle_scenario();
    DelayGrid grid{0.0, 1e-9, 128};
    std::vector<IRSnapshot> snaps;
    for (double t : {0.0, 0.2, 0.4})
        snaps.push_back(impulse_response(resolve_scene(sc, t), sc.carrier_hz, grid));

    const fs::path dir = fs::temp_directory_path() / "tempofade_ir_tests";
    fs::create_directories(dir);
    const fs::path path = dir / "snaps.csv";
    {
        std::ofstream out(path);
        write_ir_csv(out, snaps);
    }

    const auto profiles = read_ir_csv(path);
    REQUIRE(profiles.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(profiles[i].t_s == doctest::Approx(snaps[i].t_s));
        std::size_t occupied = 0;
        for (std::size_t b = 0; b < grid.n_bins; ++b)
            if (!snaps[i].empty_bin(b))
                ++occupied;
        REQUIRE(profiles[i].delay_ns.size() == occupied);
    }

    // the sparse peaks survive the text round trip
    auto tracks = associate_tracks(profiles);
    CHECK(!tracks.empty());
}

TEST_CASE("malformed snapshot CSV reports the line number") {
    const fs::path dir = fs::temp_directory_path() / "tempofade_ir_tests";
    fs::create_directories(dir);

    SUBCASE("bad header") {
        const fs::path path = dir / "bad_header.csv";
        std::ofstream(path) << "delay,power\n";
        CHECK_THROWS_WITH_AS(read_ir_csv(path), doctest::Contains(":1:"), IoError);
    }
    SUBCASE("bad row") {
        const fs::path path = dir / "bad_row.csv";
        std::ofstream(path) << "time_s,delay_ns,power_db\n0,15,0\n0,xx,0\n";
        CHECK_THROWS_WITH_AS(read_ir_csv(path), doctest::Contains(":3:"), IoError);
    }
}

TEST_CASE("track CSV export carries labels") {
    auto tracks = associate_tracks(scripted_scene(30));
    classify_tracks(tracks);
    std::ostringstream os;
    write_path_tracks_csv(os, tracks);
    CHECK(os.str().starts_with("track_id,time_s,delay_ns,power_db,label\n"));
    CHECK(os.str().find("LOS") != std::string::npos);
    CHECK(os.str().find("DynamicReflected") != std::string::npos);
}
