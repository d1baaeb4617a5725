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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tempofade {

// Canned end-to-end runs with built-in assertions. Each recipe simulates its
// scenario, writes plot-ready artifacts into the output directory and scores
// a fixed list of checks.

struct RecipeCheck {
    std::string name;
    bool pass = false;
    bool informational = false; // reported but never fails the recipe
    double value = 0.0;
    std::string detail; // "value <= limit" style, human readable
};

struct RecipeReport {
    std::string recipe;
    std::vector<RecipeCheck> checks;
    std::vector<std::filesystem::path> artifacts;
    double elapsed_s = 0.0;

    bool all_pass() const;
};

struct RecipeOptions {
    std::filesystem::path out_dir = ".";
    bool quiet = false;
    /// Scales simulated durations; < 1 gives quick runs for rerun comparisons.
    double duration_scale = 1.0;
    unsigned threads = 0;
};

const std::vector<std::string> &recipe_names();

/// Runs one of: awgn-gaussian, rician-stationary, vehicle-915, vehicle-2400,
/// humans-sweep. Throws ValidationError for unknown names.
RecipeReport run_recipe(const std::string &name, const RecipeOptions &opts);

/// Pass/fail table, one line per check (includes elapsed time).
void print_report(std::ostream &os, const RecipeReport &report);

/// Same table without timing, suitable for byte-stable artifacts.
void write_report(std::ostream &os, const RecipeReport &report);

} // namespace tempofade
