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

#include "tempofade/estimator.hpp"
#include "tempofade/ir_analysis.hpp"
#include "tempofade/scenario.hpp"
#include "tempofade/signal.hpp"

#include <filesystem>

namespace tempofade {

/// Everything a run needs, loaded from one JSON config file. Sections other
/// than "scenario" are optional and fall back to defaults. Validation errors
/// name the offending key.
struct RunConfig {
    Scenario scenario;
    WaveformConfig waveform;
    AnalysisOptions analysis;
    IrOptions ir;
    double ir_cadence_s = 0.2;

    void validate() const;
};

RunConfig load_run_config(const std::filesystem::path &path);

/// Replaces all seeds with streams derived from one base value.
void apply_seed_override(RunConfig &cfg, std::uint64_t seed);

void save_run_config(const std::filesystem::path &path, const RunConfig &cfg);

} // namespace tempofade
