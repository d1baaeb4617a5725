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

#include "tempofade/scenario_io.hpp"

#include <filesystem>
#include <vector>

namespace tempofade {

// Library-level command implementations behind the CLI, kept here so they are
// directly testable. All outputs are deterministic for a fixed config.

struct SimulateOutput {
    std::filesystem::path trace_path;
    std::filesystem::path ground_truth_path;
};

/// Simulates the configured link and writes the IQTF trace plus the per-frame
/// specular/scattered ground truth CSV.
SimulateOutput cmd_simulate(const RunConfig &cfg, const std::filesystem::path &out_dir,
                            bool quiet = true);

struct AnalyzeEnvelopeOutput {
    std::filesystem::path track_path;
    std::filesystem::path summary_path;
    EnvelopeAnalysis analysis;
};

/// Frame-sliced envelope fitting and diagnostics over an IQTF trace file.
AnalyzeEnvelopeOutput cmd_analyze_envelope(const std::filesystem::path &trace_path,
                                           const AnalysisOptions &opts,
                                           const std::filesystem::path &out_dir,
                                           bool quiet = true);

struct AnalyzeIrOutput {
    std::filesystem::path tracks_path;
    std::filesystem::path snapshots_path; // empty when analyzing an external CSV
    std::vector<PathTrack> tracks;
};

/// Impulse-response path tracking from a scenario config.
AnalyzeIrOutput cmd_analyze_ir(const RunConfig &cfg, const std::filesystem::path &out_dir,
                               bool quiet = true);

/// Impulse-response path tracking from an externally produced snapshot CSV.
AnalyzeIrOutput cmd_analyze_ir_csv(const std::filesystem::path &snapshot_csv,
                                   const IrOptions &opts, const std::filesystem::path &out_dir,
                                   bool quiet = true);

} // namespace tempofade
