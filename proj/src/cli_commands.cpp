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
#include "tempofade/trace_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace tempofade {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path &path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write: " + path.string());
    return out;
}

void ensure_dir(const fs::path &dir) {
    if (!fs::exists(dir))
        fs::create_directories(dir);
}

class SimulateSink : public FrameSink {
  public:
    SimulateSink(TraceFileWriter &writer, std::ostream &truth) : writer_(writer), truth_(truth) {
        truth_ << "frame_index,time_s,s_inst,sigma_inst\n";
    }
    void on_frame(const FrameRecord &rec) override {
        writer_.write(rec.samples);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%.9g\n", rec.index, rec.start_time_s,
                      rec.s_inst, rec.sigma_inst);
        truth_ << buf;
    }

  private:
    TraceFileWriter &writer_;
    std::ostream &truth_;
};

} // namespace

SimulateOutput cmd_simulate(const RunConfig &cfg, const fs::path &out_dir, bool quiet) {
    cfg.validate();
    ensure_dir(out_dir);

    SimulateOutput out;
    out.trace_path = out_dir / "trace.iqtf";
    out.ground_truth_path = out_dir / "ground_truth.csv";

    const std::size_t n_frames = static_cast<std::size_t>(
        std::llround(cfg.scenario.duration_s / cfg.waveform.frame_s));
    const std::uint64_t total = n_frames * cfg.waveform.frame_len();

    TraceFileWriter writer(out.trace_path,
                           TraceHeader{cfg.scenario.carrier_hz, cfg.waveform.sample_rate_hz,
                                       cfg.waveform.norm_mw, total});
    auto truth = open_out(out.ground_truth_path);
    SimulateSink sink(writer, truth);
    run_link_simulation(cfg.scenario, cfg.waveform, cfg.scenario.duration_s, sink);
    writer.close();

    if (!quiet)
        std::cout << "wrote " << out.trace_path.string() << " (" << total << " samples) and "
                  << out.ground_truth_path.string() << "\n";
    return out;
}

AnalyzeEnvelopeOutput cmd_analyze_envelope(const fs::path &trace_path,
                                           const AnalysisOptions &opts, const fs::path &out_dir,
                                           bool quiet) {
    opts.validate();
    ensure_dir(out_dir);

    AnalyzeEnvelopeOutput out;
    out.analysis = analyze_envelope_file(trace_path, opts);
    out.track_path = out_dir / "envelope_track.csv";
    out.summary_path = out_dir / "envelope_summary.json";

    auto track_csv = open_out(out.track_path);
    write_track_csv(track_csv, out.analysis.track);
    auto summary = open_out(out.summary_path);
    write_summary_json(summary, out.analysis);

    if (!quiet) {
        std::cout << "frames: " << out.analysis.track.n_frames()
                  << "  mean residue: " << out.analysis.track.mean_residue << "\n";
        write_summary_json(std::cout, out.analysis);
    }
    return out;
}

AnalyzeIrOutput cmd_analyze_ir(const RunConfig &cfg, const fs::path &out_dir, bool quiet) {
    cfg.validate();
    ensure_dir(out_dir);

    const IrRunResult run = analyze_ir_run(cfg.scenario, cfg.ir_cadence_s, cfg.ir);

    AnalyzeIrOutput out;
    out.tracks = run.tracks;
    out.snapshots_path = out_dir / "ir_snapshots.csv";
    out.tracks_path = out_dir / "ir_tracks.csv";

    auto snaps = open_out(out.snapshots_path);
    write_ir_csv(snaps, run.snapshots);
    auto tracks_csv = open_out(out.tracks_path);
    write_path_tracks_csv(tracks_csv, run.tracks);

    if (!quiet)
        std::cout << "snapshots: " << run.snapshots.size() << "  tracks: " << run.tracks.size()
                  << "\n";
    return out;
}

AnalyzeIrOutput cmd_analyze_ir_csv(const fs::path &snapshot_csv, const IrOptions &opts,
                                   const fs::path &out_dir, bool quiet) {
    opts.validate();
    ensure_dir(out_dir);

    const auto profiles = read_ir_csv(snapshot_csv);
    auto tracks = associate_tracks(profiles, opts);
    classify_tracks(tracks, opts);

    AnalyzeIrOutput out;
    out.tracks = std::move(tracks);
    out.tracks_path = out_dir / "ir_tracks.csv";
    auto tracks_csv = open_out(out.tracks_path);
    write_path_tracks_csv(tracks_csv, out.tracks);

    if (!quiet)
        std::cout << "snapshots: " << profiles.size() << "  tracks: " << out.tracks.size() << "\n";
    return out;
}

} // namespace tempofade
