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

#include "tempofade/cli_commands.hpp"
#include "tempofade/errors.hpp"
#include "tempofade/recipes.hpp"
#include "tempofade/trace_file.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tempofade;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / "tempofade_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path &dir, const std::string &body) {
    const fs::path path = dir / "config.json";
    std::ofstream(path) << body;
    return path;
}

const char *tiny_config = R"({
  "scenario": {
    "name": "tiny",
    "tx_pos": [0, 1, 1],
    "rx_pos": [12, 1, 1],
    "carrier_hz": 915e6,
    "duration_s": 0.1,
    "seed": 5,
    "n_const_scattered": 8,
    "n_dyn_scattered_per_object": 4,
    "objects": [
      {"id": "cart", "kind": "vehicle", "reflection_coefficient": 0.8,
       "waypoints": [{"t": 0, "pos": [2, 6, 1]}, {"t": 0.1, "pos": [3, 6, 1]}]}
    ]
  },
  "waveform": {"noise_power_mw": 1e-9}
})";

std::string file_bytes(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("run config loading and validation") {
    const fs::path dir = fresh_dir("config");

    SUBCASE("well-formed config loads with defaults applied") {
        const RunConfig cfg = load_run_config(write_config(dir, tiny_config));
        CHECK(cfg.scenario.name == "tiny");
        CHECK(cfg.scenario.objects.size() == 1);
        CHECK(cfg.waveform.noise_power_mw == 1e-9);
        CHECK(cfg.waveform.sample_rate_hz == 1e6); // default
        CHECK(cfg.analysis.bins == 40);            // default
    }
    SUBCASE("missing scenario section") {
        CHECK_THROWS_WITH_AS(load_run_config(write_config(dir, R"({"waveform": {}})")),
                             doctest::Contains("scenario"), ValidationError);
    }
    SUBCASE("zero carrier names the key") {
        std::string body = tiny_config;
        body.replace(body.find("915e6"), 5, "0.0  ");
        CHECK_THROWS_WITH_AS(load_run_config(write_config(dir, body)),
                             doctest::Contains("carrier_hz"), ValidationError);
    }
    SUBCASE("waypoint with missing pos names the key path") {
        std::string body = tiny_config;
        body.replace(body.find("\"pos\": [2, 6, 1]"), 16, "\"poz\": [2, 6, 1]");
        CHECK_THROWS_WITH_AS(load_run_config(write_config(dir, body)),
                             doctest::Contains("waypoints[0].pos"), ValidationError);
    }
    SUBCASE("unparseable JSON is a validation error") {
        CHECK_THROWS_AS(load_run_config(write_config(dir, "{nope")), ValidationError);
    }
    SUBCASE("missing file is an IO error") {
        CHECK_THROWS_AS(load_run_config(dir / "absent.json"), IoError);
    }
}

TEST_CASE("shipped sample configs load") {
    const fs::path root = TEMPOFADE_SOURCE_DIR;
    const RunConfig vehicle = load_run_config(root / "data" / "rolling_mill_vehicle.json");
    CHECK(vehicle.scenario.objects.size() == 1);
    CHECK(vehicle.scenario.carrier_hz == 915e6);
    CHECK(vehicle.scenario.duration_s == 60.0);

    const RunConfig lab = load_run_config(root / "data" / "lab_humans.json");
    CHECK(lab.scenario.objects.size() == 2);
    for (const auto &obj : lab.scenario.objects)
        CHECK(obj.kind == MovingObject::Kind::Human);
}

TEST_CASE("cmd_simulate writes a trace whose header echoes the config") {
    const fs::path dir = fresh_dir("simulate");
    const RunConfig cfg = load_run_config(write_config(dir, tiny_config));

    const SimulateOutput out = cmd_simulate(cfg, dir / "out");
    REQUIRE(fs::exists(out.trace_path));
    REQUIRE(fs::exists(out.ground_truth_path));

    TraceFileReader reader(out.trace_path);
    CHECK(reader.header().carrier_hz == cfg.scenario.carrier_hz);
    CHECK(reader.header().sample_rate_hz == cfg.waveform.sample_rate_hz);
    CHECK(reader.header().norm_mw == cfg.waveform.norm_mw);
    CHECK(reader.header().sample_count == 20 * 5000);

    // ground truth has one row per frame plus the header
    std::ifstream truth(out.ground_truth_path);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(truth, line))
        ++lines;
    CHECK(lines == 21);

    SUBCASE("rerun is byte-identical") {
        const SimulateOutput again = cmd_simulate(cfg, dir / "out2");
        CHECK(file_bytes(out.trace_path) == file_bytes(again.trace_path));
        CHECK(file_bytes(out.ground_truth_path) == file_bytes(again.ground_truth_path));
    }
    SUBCASE("seed override changes the bytes") {
        RunConfig other = cfg;
        apply_seed_override(other, 99);
        const SimulateOutput changed = cmd_simulate(other, dir / "out3");
        CHECK(file_bytes(out.trace_path) != file_bytes(changed.trace_path));
    }
}

TEST_CASE("cmd_analyze_envelope end to end") {
    const fs::path dir = fresh_dir("envelope");
    RunConfig cfg = load_run_config(write_config(dir, tiny_config));
    cfg.scenario.duration_s = 0.5;
    const SimulateOutput sim = cmd_simulate(cfg, dir / "out");

    const AnalyzeEnvelopeOutput out = cmd_analyze_envelope(sim.trace_path, cfg.analysis, dir / "out");
    REQUIRE(fs::exists(out.track_path));
    REQUIRE(fs::exists(out.summary_path));
    CHECK(out.analysis.track.n_frames() == 100);

    // summary must be machine-readable JSON
    std::ifstream summary(out.summary_path);
    const auto parsed = nlohmann::json::parse(summary);
    CHECK(parsed.contains("mean_residue"));
    CHECK(parsed["n_frames"] == 100);

    SUBCASE("truncated trace fails cleanly") {
        const fs::path cut = dir / "cut.iqtf";
        fs::copy_file(sim.trace_path, cut);
        fs::resize_file(cut, fs::file_size(cut) / 2);
        CHECK_THROWS_AS(cmd_analyze_envelope(cut, cfg.analysis, dir / "out"), IoError);
    }
}

TEST_CASE("cmd_analyze_ir from a scenario and from an external CSV") {
    const fs::path dir = fresh_dir("ir");
    RunConfig cfg = load_run_config(write_config(dir, tiny_config));
    cfg.scenario.duration_s = 2.0;

    const AnalyzeIrOutput from_scene = cmd_analyze_ir(cfg, dir / "out");
    REQUIRE(fs::exists(from_scene.tracks_path));
    REQUIRE(fs::exists(from_scene.snapshots_path));
    CHECK(!from_scene.tracks.empty());

    // an externally produced CSV with one constant arrival
    const fs::path csv = dir / "external.csv";
    {
        std::ofstream out(csv);
        out << "time_s,delay_ns,power_db\n";
        for (int k = 0; k < 12; ++k)
            out << 0.2 * k << ",15,0\n";
    }
    const AnalyzeIrOutput external = cmd_analyze_ir_csv(csv, IrOptions{}, dir / "out_ext");
    REQUIRE(external.tracks.size() == 1);
    CHECK(external.tracks[0].label == TrackLabel::Los);
}

TEST_CASE("recipe scaffolding stays deterministic at reduced duration") {
    const fs::path dir_a = fresh_dir("recipe_a");
    const fs::path dir_b = fresh_dir("recipe_b");
    RecipeOptions opts;
    opts.duration_scale = 0.02;
    opts.quiet = true;

    opts.out_dir = dir_a;
    const RecipeReport a = run_recipe("humans-sweep", opts);
    opts.out_dir = dir_b;
    const RecipeReport b = run_recipe("humans-sweep", opts);

    CHECK(a.checks.size() == 3);
    for (const auto &c : a.checks)
        CHECK(c.informational);
    REQUIRE(a.artifacts.size() == b.artifacts.size());
    for (std::size_t i = 0; i < a.artifacts.size(); ++i)
        CHECK(file_bytes(a.artifacts[i]) == file_bytes(b.artifacts[i]));

    CHECK_THROWS_AS(run_recipe("nonsense", opts), ValidationError);
}
