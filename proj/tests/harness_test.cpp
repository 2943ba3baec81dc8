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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sparsefocus/harness/report.hpp>
#include <sparsefocus/harness/runner.hpp>
#include <sparsefocus/harness/scenario.hpp>

#include "support.hpp"

using namespace sparsefocus;
using namespace sparsefocus::harness;
namespace fs = std::filesystem;

namespace {

Scenario small_scenario() {
    Scenario s;
    s.name = "small";
    s.sources = {{0.0, 0.0}, {0.3, 0.0}};
    s.num_bands = 5;
    s.snapshots_per_sensor = 2;
    s.trials = 6;
    s.seed = 99;
    s.grid_points = 512;
    s.music_grid_step = 1e-2;
    s.sweep_values = {1, 2};
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sparsefocus_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Presets, NamesAndAliases) {
    EXPECT_EQ(preset_names().size(), 8u);
    for (const auto& n : preset_names()) EXPECT_NO_THROW(preset(n)) << n;
    EXPECT_EQ(preset("fig6").name, "fig6a");
    EXPECT_EQ(preset("fig7").name, "fig7a");
    try {
        preset("fig9");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownPreset);
        EXPECT_TRUE(e.is_config());
    }
}

TEST(Presets, TwoSourceStudies) {
    const auto s = preset("fig3");
    EXPECT_EQ(s.sensors, (std::vector<int>{1, 2, 5, 6, 12, 14}));
    EXPECT_EQ(s.num_bands, 41);
    EXPECT_EQ(s.f_min_hz, 80.0);
    EXPECT_EQ(s.f_max_hz, 120.0);
    ASSERT_EQ(s.sources.size(), 2u);
    EXPECT_EQ(s.sources[1].u, 0.06);
    EXPECT_EQ(s.sources[0].snr_db, 0.0);
    EXPECT_EQ(s.snapshots_for(3), 18);
    EXPECT_EQ(s.nb_snapshots_for(3), 123 * 6);

    const auto f4 = preset("fig4");
    EXPECT_EQ(f4.sweep_param, SweepParam::Separation);
    ASSERT_EQ(f4.sweep_points().size(), 10u);
    EXPECT_DOUBLE_EQ(f4.sweep_points().front(), 0.01);
    EXPECT_DOUBLE_EQ(f4.sweep_points().back(), 0.1);
    EXPECT_EQ(f4.snapshots_per_sensor, 5);
    EXPECT_EQ(f4.nb_snapshots_for(5), 205 * 6);
}

TEST(Presets, NineSourceStudies) {
    const auto u = nine_source_doas();
    ASSERT_EQ(u.size(), 9u);
    EXPECT_EQ(u[0], 0.0);
    EXPECT_NEAR(u[1], std::cos(101.25 * pi / 180.0), 1e-15);
    EXPECT_NEAR(u[4], -std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(u[8], 0.7, 1e-15);

    const auto a = preset("fig6a");
    EXPECT_EQ(a.sweep_param, SweepParam::SnapshotsPerSensor);
    EXPECT_EQ(a.sweep_points(), (std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
    const auto b = preset("fig7b");
    EXPECT_EQ(b.sweep_param, SweepParam::SnrDb);
    EXPECT_EQ(b.snapshots_per_sensor, 1);
    EXPECT_EQ(b.nb_snapshots_for(1), 41 * 6);
    EXPECT_EQ(preset("fig7a").sources[3].snr_db, -5.0);
}

TEST(Config, JsonRoundTrip) {
    const auto s = preset("fig4");
    const auto back = scenario_from_json(to_json(s));
    EXPECT_EQ(to_json(back), to_json(s));
}

TEST(Config, MinimalFile) {
    const auto s = scenario_from_string(R"({"sources": [{"u": 0.1}], "trials": 3, "methods": ["ap", "nb"]})");
    EXPECT_EQ(s.trials, 3);
    EXPECT_EQ(s.methods, (std::vector<Method>{Method::AP, Method::NB}));
    EXPECT_EQ(s.sources[0].snr_db, 0.0);
    EXPECT_EQ(scenario_from_string(R"({"focusing": {"method": "scr"}})").methods, (std::vector<Method>{Method::SCR}));
}

TEST(Config, ErrorsNameTheKey) {
    auto message = [](const std::string& text) {
        try {
            scenario_from_string(text);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::ConfigError);
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message(R"({"band": {"f_min": 80}})").find("band.f_min"), std::string::npos);
    EXPECT_NE(message(R"({"sources": [{"u": 2.0}]})").find("sources.u"), std::string::npos);
    EXPECT_NE(message(R"({"sources": [{"snr_db": 1}]})").find("sources[0].u"), std::string::npos);
    EXPECT_NE(message(R"({"trials": "many"})").find("trials"), std::string::npos);
    EXPECT_NE(message(R"({"methods": ["music"]})").find("methods"), std::string::npos);
    EXPECT_NE(message("{\n  \"trials\": 3,\n  oops\n}").find("line 3"), std::string::npos);
    EXPECT_NE(message(R"({"geometry": {"sensors": [0, 2, 5]}})").find("geometry.sensors"), std::string::npos);
    EXPECT_NE(message(R"({"band": {"f_min_hz": 80, "f_max_hz": 120.000123456, "num_bands": 3}})").find("band"),
              std::string::npos);
    EXPECT_NE(message(R"({"focusing": {"focus": "center"}})").find("focusing.focus"), std::string::npos);
    EXPECT_NE(message(R"({"sweep": {"param": "separation"}, "sources": [{"u": 0}]})").find("sweep.param"),
              std::string::npos);
}

TEST(Runner, SingleTrialIsDeterministic) {
    auto s = small_scenario();
    s.trials = 1;
    const auto a = run_scenario(s, {1, {}});
    const auto b = run_scenario(s, {1, {}});
    for (std::size_t p = 0; p < a.points.size(); ++p)
        for (std::size_t m = 0; m < a.points[p].methods.size(); ++m) {
            EXPECT_EQ(a.points[p].methods[m].records[0].doas, b.points[p].methods[m].records[0].doas);
            EXPECT_EQ(a.points[p].methods[m].spectrum_mean, b.points[p].methods[m].spectrum_mean);
        }
}

TEST(Runner, JobsDoNotChangeOutput) {
    const auto s = small_scenario();
    const auto d1 = scratch_dir("jobs1");
    const auto d3 = scratch_dir("jobs3");
    const auto f1 = write_report(run_scenario(s, {1, {}}), d1);
    write_report(run_scenario(s, {3, {}}), d3);
    ASSERT_FALSE(f1.empty());
    for (const auto& f : f1) EXPECT_EQ(slurp(f), slurp(d3 / f.filename())) << f.filename();
}

TEST(Runner, SummaryShape) {
    const auto s = small_scenario();
    const auto rep = run_scenario(s, {1, {}});
    ASSERT_EQ(rep.points.size(), 2u);
    const auto& pt = rep.points[1];
    EXPECT_EQ(pt.snapshots, 12);
    EXPECT_EQ(pt.nb_snapshots, 60);
    EXPECT_EQ(pt.truths, (std::vector<double>{0.0, 0.3}));
    ASSERT_EQ(pt.methods.size(), 4u);
    for (const auto& m : pt.methods) {
        EXPECT_EQ(m.trials, 6);
        EXPECT_GE(m.detection, 0.0);
        EXPECT_LE(m.detection, 1.0);
        ASSERT_TRUE(m.resolution.has_value());
        EXPECT_GE(*m.resolution, 0.0);
        EXPECT_LE(*m.resolution, 1.0);
        ASSERT_TRUE(m.rmse.has_value());
        EXPECT_EQ(m.mdl_mean.size(), 14u);
        EXPECT_EQ(m.mdl_gap_mean.size(), 13u);
        EXPECT_EQ(m.spectrum_mean.size(), rep.spectrum_grid.size());
        EXPECT_EQ(m.records.size(), 6u);
    }
    EXPECT_THROW(pt.method(Method::AP).records.at(6), std::out_of_range);
}

TEST(Runner, NoiseOnlyMdlFindsNothing) {
    Scenario s;
    s.sources.clear();
    s.methods = {Method::AP, Method::ISS, Method::NB};
    s.criterion = Criterion::MDL;
    s.num_bands = 9;
    s.snapshots_per_sensor = 20;
    s.trials = 20;
    s.estimate_doa = false;
    s.keep_spectra = false;
    const auto rep = run_scenario(s, {1, {}});
    for (const auto& m : rep.points[0].methods) EXPECT_GE(m.detection, 0.9) << to_string(m.method);
}

TEST(Runner, ScrNoiseIsColoured) {
    // Resampling interpolates the white lag impulse, so the focused noise is
    // lowpass Toeplitz rather than a scaled identity and its eigenvalues spread.
    Scenario s;
    s.sources.clear();
    s.methods = {Method::SCR};
    const harness::detail::PointSetup setup(s, s.snapshots_per_sensor);
    const ArrayGeometry& g = setup.geom;
    std::vector<CorrelationVector> bands;
    for (double f : setup.plan.frequencies())
        bands.push_back(coarray_correlation(ensemble_covariance(g, {}, f, 1.0), setup.coarray, f));
    const auto eig = eig_sorted(lra_acm(setup.scr_bank->focus(bands)));
    const auto mags = eig.magnitudes();
    EXPECT_GT(mags.front() / mags.back(), 2.0);
}

TEST(Runner, HighSnrTwoSourcesAreFound) {
    auto s = small_scenario();
    s.sources = {{-0.3, 10.0}, {0.4, 10.0}};
    s.sweep_values = {10};
    s.trials = 10;
    s.music_grid_step = 1e-3;
    const auto rep = run_scenario(s, {1, {}});
    for (const auto& m : rep.points[0].methods) {
        EXPECT_EQ(m.detection, 1.0) << to_string(m.method);
        EXPECT_EQ(*m.resolution, 1.0) << to_string(m.method);
        int close = 0;
        for (const auto& r : m.records) close += std::abs(r.doas[0] + 0.3) < 1e-2 && std::abs(r.doas[1] - 0.4) < 1e-2;
        // incoherent averaging can split one sharp peak into two nearby maxima
        if (m.method == Method::ISS) {
            EXPECT_GE(close, 8);
        } else {
            EXPECT_EQ(close, 10) << to_string(m.method);
            EXPECT_LT(*m.rmse, 5e-3) << to_string(m.method);
        }
    }
}

TEST(Report, CsvHeaders) {
    const auto dir = scratch_dir("report");
    const auto files = write_report(run_scenario(small_scenario(), {1, {}}), dir, true);
    auto first_line = [&](const std::string& name) {
        std::ifstream in(dir / name);
        std::string line;
        std::getline(in, line);
        return line;
    };
    EXPECT_EQ(first_line("detection_probability.csv"), "sweep_value,method,metric,stderr,trials");
    EXPECT_EQ(first_line("rmse.csv"), "sweep_value,method,metric,stderr,trials");
    EXPECT_EQ(first_line("criterion_curves.csv"), "sweep_value,method,criterion,q,mean,stderr,trials");
    EXPECT_EQ(first_line("spectra.csv"), "sweep_value,method,u,mean,trials");
    EXPECT_EQ(first_line("trials.csv"), "sweep_value,method,trial,seed,q_mdl,q_mdl_gap,resolved,doas");
    EXPECT_TRUE(fs::exists(dir / "rmse.svg"));
    EXPECT_EQ(scenario_from_string(slurp(dir / "scenario.json")).name, "small");
}

#ifdef SPARSEFOCUS_CLI

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + SPARSEFOCUS_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
    const auto dir = scratch_dir("cli");
    {
        std::ofstream(dir / "bad.json") << R"({"trials": 0})";
        std::ofstream(dir / "ok.json") << R"({"sources": [{"u": 0.2}], "band": {"f_min_hz": 80, "f_max_hz": 84,
            "num_bands": 5}, "trials": 2, "focusing": {"grid_points": 256}, "music": {"grid_step": 0.01}})";
    }
    EXPECT_EQ(run_cli("simulate --config " + (dir / "bad.json").string()), 2);
    EXPECT_EQ(run_cli("simulate --config " + (dir / "missing.json").string()), 2);
    EXPECT_EQ(run_cli("preset --name fig99"), 2);
    EXPECT_EQ(run_cli("bogus"), 2);
    EXPECT_EQ(run_cli("preset --name fig3 --print-config"), 0);
    EXPECT_EQ(run_cli("simulate --quiet --config " + (dir / "ok.json").string() + " --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "detection_probability.csv"));
    EXPECT_EQ(run_cli("simulate --quiet --methods ap,xx --config " + (dir / "ok.json").string()), 2);
}

#endif
