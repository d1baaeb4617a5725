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

#include <CLI11.hpp>

#include <iostream>

namespace {

// exit codes: 0 success, 1 validation, 2 runtime, 3 failed recipe checks
constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_runtime = 2;
constexpr int exit_checks_failed = 3;

} // namespace

int main(int argc, char **argv) {
    using namespace tempofade;

    CLI::App app{"temporal multipath fading simulator and link analysis toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // accept global flags after the subcommand name

    std::string config_path;
    std::string out_dir = ".";
    std::string trace_path;
    std::string snapshots_path;
    std::string recipe;
    double frames_ms = 5.0;
    int bins = 40;
    std::uint64_t seed_override = 0;
    bool have_seed_override = false;
    bool quiet = false;

    app.add_flag("--quiet", quiet, "suppress progress output");

    auto *sim = app.add_subcommand("simulate", "simulate a link and write an IQTF trace");
    sim->add_option("--config", config_path, "run config (JSON)")->required();
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--seed-override", seed_override, "replace all configured seeds")
        ->each([&](const std::string &) { have_seed_override = true; });

    auto *env = app.add_subcommand("analyze-envelope",
                                   "frame-sliced envelope fit of an IQTF trace");
    env->add_option("trace", trace_path, "IQTF trace file")->required();
    env->add_option("--out", out_dir, "output directory");
    env->add_option("--frames-ms", frames_ms, "frame length in milliseconds");
    env->add_option("--bins", bins, "histogram bins per frame");

    auto *ir = app.add_subcommand("analyze-ir", "impulse-response path tracking");
    ir->add_option("--config", config_path, "run config (JSON) to simulate snapshots from");
    ir->add_option("--snapshots", snapshots_path, "externally produced snapshot CSV");
    ir->add_option("--out", out_dir, "output directory");

    auto *rep = app.add_subcommand("reproduce", "run a canned scenario with built-in checks");
    std::string names;
    for (const auto &n : recipe_names())
        names += (names.empty() ? "" : ", ") + n;
    rep->add_option("--recipe", recipe, "one of: " + names)->required();
    rep->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        if (sim->parsed()) {
            RunConfig cfg = load_run_config(config_path);
            if (have_seed_override)
                apply_seed_override(cfg, seed_override);
            cmd_simulate(cfg, out_dir, quiet);
        } else if (env->parsed()) {
            AnalysisOptions opts;
            opts.frame_s = frames_ms * 1e-3;
            opts.bins = bins;
            cmd_analyze_envelope(trace_path, opts, out_dir, quiet);
        } else if (ir->parsed()) {
            if (config_path.empty() == snapshots_path.empty())
                throw ValidationError(
                    "analyze-ir needs exactly one of --config or --snapshots");
            if (!config_path.empty()) {
                cmd_analyze_ir(load_run_config(config_path), out_dir, quiet);
            } else {
                cmd_analyze_ir_csv(snapshots_path, IrOptions{}, out_dir, quiet);
            }
        } else if (rep->parsed()) {
            RecipeOptions opts;
            opts.out_dir = out_dir;
            opts.quiet = quiet;
            const RecipeReport report = run_recipe(recipe, opts);
            if (!quiet)
                print_report(std::cout, report);
            if (!report.all_pass())
                return exit_checks_failed;
        }
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}
