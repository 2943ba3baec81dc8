// SPDX-License-Identifier: Apache-2.0
//
// sparsefocus: coherent broadband focusing for sparse linear arrays
// Copyright (C) 2026 The sparsefocus authors
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

// sparsefocus command-line simulator.
//
//   sparsefocus simulate --config scenario.json --out results/
//   sparsefocus preset --name fig3 --out results/fig3
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <sparsefocus/harness/report.hpp>
#include <sparsefocus/harness/runner.hpp>
#include <sparsefocus/harness/scenario.hpp>

namespace sh = sparsefocus::harness;

namespace {

struct Overrides {
    int trials = 0;
    long long seed = -1;
    std::string methods;
    int jobs = 0;
    bool plots = false;
    bool quiet = false;
    std::string out = "results";
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Master seed")->check(CLI::NonNegativeNumber);
    cmd->add_option("--methods", o.methods, "Comma-separated subset of ap,scr,iss,nb");
    cmd->add_option("--jobs", o.jobs, "Worker threads (default: all cores)")->check(CLI::PositiveNumber);
    cmd->add_flag("--plots", o.plots, "Also write SVG plots of each metric");
    cmd->add_flag("--quiet", o.quiet, "No progress output");
}

void apply(sh::Scenario& s, const Overrides& o) {
    if (o.trials > 0) s.trials = o.trials;
    if (o.seed >= 0) s.seed = static_cast<std::uint64_t>(o.seed);
    if (!o.methods.empty()) {
        s.methods.clear();
        std::stringstream ss(o.methods);
        for (std::string item; std::getline(ss, item, ',');)
            if (!item.empty()) s.methods.push_back(sh::parse_method(item));
    }
    s.validate();
}

int run(sh::Scenario scenario, const Overrides& o) {
    apply(scenario, o);
    sh::RunOptions opts;
    opts.jobs = o.jobs;
    const auto points = scenario.sweep_points();
    if (!o.quiet)
        opts.progress = [&](int point, int done, int total) {
            std::cerr << "\r[" << scenario.name << "] point " << point + 1 << "/" << points.size() << "  trials "
                      << done << "/" << total << std::flush;
            if (done == total) std::cerr << '\n';
        };
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = sh::run_scenario(scenario, opts);
    const auto files = sh::write_report(report, o.out, o.plots);
    if (!o.quiet) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "wrote " << files.size() << " files to " << o.out << " in " << secs << " s\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Broadband sparse-array focusing simulator"};
    app.require_subcommand(1);

    Overrides sim_opts;
    std::string config;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario from a JSON config");
    simulate->add_option("--config", config, "Scenario JSON file")->required();
    add_overrides(simulate, sim_opts);

    Overrides preset_opts;
    std::string name;
    bool print_config = false;
    auto* preset = app.add_subcommand("preset", "Run a built-in scenario");
    preset->add_option("--name", name, "One of fig2, fig3, fig4, fig5, fig6a, fig6b, fig7a, fig7b")->required();
    preset->add_flag("--print-config", print_config, "Print the preset as JSON and exit");
    add_overrides(preset, preset_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*simulate) return run(sh::load_scenario(config), sim_opts);
        auto scenario = sh::preset(name);
        if (print_config) {
            apply(scenario, preset_opts);
            std::cout << sh::to_json(scenario).dump(2) << '\n';
            return 0;
        }
        return run(scenario, preset_opts);
    } catch (const sparsefocus::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (e.is_config()) return 2;
        if (e.is_numerical()) return 3;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
