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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../error.hpp"
#include "../estimation.hpp"
#include "../geometry.hpp"
#include "../resampling.hpp"
#include "../synthesis.hpp"

namespace sparsefocus::harness {

enum class Method { AP, SCR, ISS, NB };

inline std::string to_string(Method m) {
    switch (m) {
    case Method::AP: return "ap";
    case Method::SCR: return "scr";
    case Method::ISS: return "iss";
    case Method::NB: return "nb";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "ap") return Method::AP;
    if (s == "scr") return Method::SCR;
    if (s == "iss") return Method::ISS;
    if (s == "nb") return Method::NB;
    throw Error(Errc::ConfigError, "methods: unknown method '" + s + "' (expected ap, scr, iss or nb)");
}

inline std::string to_string(Criterion c) { return c == Criterion::MDL ? "mdl" : "mdl_gap"; }

enum class SweepParam { SnapshotsPerSensor, SnrDb, Separation };

inline std::string to_string(SweepParam p) {
    switch (p) {
    case SweepParam::SnapshotsPerSensor: return "snapshots_per_sensor";
    case SweepParam::SnrDb: return "snr_db";
    case SweepParam::Separation: return "separation";
    }
    return "?";
}

struct SourceConfig {
    double u = 0.0;
    double snr_db = 0.0;
};

/// Everything needed to reproduce one simulation study.
struct Scenario {
    std::string name = "custom";

    std::vector<int> sensors{1, 2, 5, 6, 12, 14};
    double design_freq_hz = default_design_freq_hz;
    double speed_mps = default_speed_mps;

    std::vector<SourceConfig> sources;
    double f_min_hz = 80.0;
    double f_max_hz = 120.0;
    int num_bands = 41;
    double snapshots_per_sensor = 3.0;

    std::vector<Method> methods{Method::AP, Method::SCR, Method::ISS, Method::NB};
    int trials = 500;
    std::uint64_t seed = 1;
    Criterion criterion = Criterion::MDLGap;

    // focusing
    int grid_points = 4096;
    int fir_taps_per_factor = 8;
    std::string focus;  ///< "" = per-method default, "center", "min" or "hz:<value>"

    // estimation
    double music_grid_step = 1e-3;
    bool oracle_source_count = true;
    std::string effective_snapshots = "time_bandwidth";  ///< or "per_band"
    double nb_snapshot_factor = 0.0;                     ///< 0 means M

    // sweep (one axis)
    SweepParam sweep_param = SweepParam::SnapshotsPerSensor;
    std::vector<double> sweep_values;

    // outputs
    bool estimate_doa = true;
    bool keep_spectra = true;
    bool keep_curves = true;

    int num_sensors() const { return static_cast<int>(sensors.size()); }

    /// Snapshots per band for a given snapshots/sensor value.
    int snapshots_for(double per_sensor) const {
        return std::max(1, static_cast<int>(std::lround(per_sensor * num_sensors())));
    }
    int nb_snapshots_for(double per_sensor) const {
        const double factor = nb_snapshot_factor > 0.0 ? nb_snapshot_factor : static_cast<double>(num_bands);
        return std::max(1, static_cast<int>(std::lround(factor * snapshots_for(per_sensor))));
    }

    std::vector<double> sweep_points() const {
        if (!sweep_values.empty()) return sweep_values;
        switch (sweep_param) {
        case SweepParam::SnapshotsPerSensor: return {snapshots_per_sensor};
        case SweepParam::SnrDb: return {sources.empty() ? 0.0 : sources.front().snr_db};
        case SweepParam::Separation:
            return {sources.size() >= 2 ? sources[1].u - sources[0].u : 0.0};
        }
        return {};
    }

    void validate() const;
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& key, const std::string& msg) {
    throw Error(Errc::ConfigError, key + ": " + msg);
}

inline void reject_unknown(const nlohmann::json& obj, const std::string& where, std::initializer_list<const char*> known) {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) config_fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
}

template <typename T>
T get_as(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        config_fail(path, "missing or has the wrong type");
    }
}

template <typename T>
void read_opt(const nlohmann::json& obj, const char* key, const std::string& path, T& dst) {
    if (obj.contains(key)) dst = get_as<T>(obj, key, path);
}

inline const nlohmann::json& object_at(const nlohmann::json& obj, const char* key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_object()) config_fail(path, "expected an object");
    return v;
}

}  // namespace detail

inline void Scenario::validate() const {
    using detail::config_fail;
    if (sensors.empty()) config_fail("geometry.sensors", "needs at least one sensor");
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        if (sensors[i] < 0) config_fail("geometry.sensors", "lattice indices must be nonnegative");
        if (i && sensors[i] <= sensors[i - 1]) config_fail("geometry.sensors", "must be strictly increasing");
    }
    if (!(design_freq_hz > 0.0)) config_fail("geometry.design_freq_hz", "must be positive");
    if (!(speed_mps > 0.0)) config_fail("geometry.speed_mps", "must be positive");
    for (const auto& s : sources)
        if (!(std::abs(s.u) <= 1.0)) config_fail("sources.u", "directional cosine must lie in [-1, 1]");
    if (!(f_min_hz > 0.0) || !(f_max_hz >= f_min_hz)) config_fail("band", "requires 0 < f_min_hz <= f_max_hz");
    if (num_bands < 1) config_fail("band.num_bands", "must be at least 1");
    if (num_bands == 1 && f_min_hz != f_max_hz) config_fail("band", "a single band needs f_min_hz == f_max_hz");
    if (!(snapshots_per_sensor > 0.0)) config_fail("snapshots_per_sensor", "must be positive");
    if (methods.empty()) config_fail("methods", "at least one method is required");
    if (trials < 1) config_fail("trials", "must be at least 1");
    if (grid_points < 2) config_fail("focusing.grid_points", "must be at least 2");
    if (fir_taps_per_factor < 1) config_fail("focusing.fir_taps_per_factor", "must be positive");
    if (!focus.empty() && focus != "center" && focus != "min" && focus.rfind("hz:", 0) != 0)
        config_fail("focusing.focus", "expected center, min or hz:<value>");
    if (focus.rfind("hz:", 0) == 0) {
        try {
            if (!(std::stod(focus.substr(3)) > 0.0)) config_fail("focusing.focus", "focus frequency must be positive");
        } catch (const std::logic_error&) {
            config_fail("focusing.focus", "cannot parse frequency in '" + focus + "'");
        }
    }
    if (!(music_grid_step > 0.0) || music_grid_step > 1.0) config_fail("music.grid_step", "must be in (0, 1]");
    if (effective_snapshots != "time_bandwidth" && effective_snapshots != "per_band")
        config_fail("estimation.effective_snapshots", "expected time_bandwidth or per_band");
    if (nb_snapshot_factor < 0.0) config_fail("estimation.nb_snapshot_factor", "must be nonnegative");
    if (sweep_param == SweepParam::Separation && sources.size() < 2)
        config_fail("sweep.param", "separation sweep needs at least two sources");
    if (sweep_param == SweepParam::SnrDb && sources.empty())
        config_fail("sweep.param", "snr sweep needs at least one source");
    try {
        const auto co = difference_coarray(ArrayGeometry::half_wavelength(sensors, design_freq_hz, speed_mps));
        if (co.P() < 2) config_fail("geometry.sensors", "the coarray needs at least lags 0 and 1");
    } catch (const Error& e) {
        if (e.is_config()) throw;
        config_fail("geometry.sensors", e.what());
    }
    if (std::find(methods.begin(), methods.end(), Method::SCR) != methods.end()) {
        // every band must reach the focus frequency by a rational rate change
        const BandPlan plan(f_min_hz, f_max_hz, num_bands);
        double f0 = plan.f_min();
        if (focus == "center") f0 = plan.center();
        if (focus.rfind("hz:", 0) == 0) f0 = std::stod(focus.substr(3));
        for (double f : plan.frequencies()) {
            if (f < f0) config_fail("focusing.focus", "SCR cannot focus above the lowest band frequency");
            try {
                rationalize(f, f0);
            } catch (const Error&) {
                config_fail("band", "band frequency " + std::to_string(f) + " Hz has no rational ratio to the focus");
            }
        }
    }
    for (double v : sweep_points()) {
        if (sweep_param == SweepParam::SnapshotsPerSensor && !(v > 0.0))
            config_fail("sweep.values", "snapshots per sensor must be positive");
        if (sweep_param == SweepParam::Separation && !(std::abs(sources[0].u + v) <= 1.0))
            config_fail("sweep.values", "separation moves the second source outside [-1, 1]");
    }
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    using namespace detail;
    if (!j.is_object()) config_fail("<root>", "expected a JSON object");
    reject_unknown(j, "", {"name", "geometry", "sources", "band", "snapshots_per_sensor", "methods", "trials", "seed",
                           "criterion", "focusing", "music", "estimation", "sweep", "outputs"});
    Scenario s;
    read_opt(j, "name", "name", s.name);

    if (j.contains("geometry")) {
        const auto& g = object_at(j, "geometry", "geometry");
        reject_unknown(g, "geometry", {"sensors", "design_freq_hz", "speed_mps"});
        read_opt(g, "sensors", "geometry.sensors", s.sensors);
        read_opt(g, "design_freq_hz", "geometry.design_freq_hz", s.design_freq_hz);
        read_opt(g, "speed_mps", "geometry.speed_mps", s.speed_mps);
    }
    if (j.contains("sources")) {
        const auto& src = j.at("sources");
        if (!src.is_array()) config_fail("sources", "expected an array");
        for (std::size_t i = 0; i < src.size(); ++i) {
            const std::string path = "sources[" + std::to_string(i) + "]";
            if (!src[i].is_object()) config_fail(path, "expected an object");
            reject_unknown(src[i], path, {"u", "snr_db"});
            SourceConfig sc;
            sc.u = get_as<double>(src[i], "u", path + ".u");
            read_opt(src[i], "snr_db", path + ".snr_db", sc.snr_db);
            s.sources.push_back(sc);
        }
    }
    if (j.contains("band")) {
        const auto& b = object_at(j, "band", "band");
        reject_unknown(b, "band", {"f_min_hz", "f_max_hz", "num_bands"});
        read_opt(b, "f_min_hz", "band.f_min_hz", s.f_min_hz);
        read_opt(b, "f_max_hz", "band.f_max_hz", s.f_max_hz);
        read_opt(b, "num_bands", "band.num_bands", s.num_bands);
    }
    read_opt(j, "snapshots_per_sensor", "snapshots_per_sensor", s.snapshots_per_sensor);
    read_opt(j, "trials", "trials", s.trials);
    read_opt(j, "seed", "seed", s.seed);
    if (j.contains("methods")) {
        s.methods.clear();
        for (const auto& m : get_as<std::vector<std::string>>(j, "methods", "methods")) s.methods.push_back(parse_method(m));
    }
    if (j.contains("criterion")) {
        const auto c = get_as<std::string>(j, "criterion", "criterion");
        if (c == "mdl") s.criterion = Criterion::MDL;
        else if (c == "mdl_gap" || c == "mdl-gap") s.criterion = Criterion::MDLGap;
        else config_fail("criterion", "expected mdl or mdl_gap");
    }
    if (j.contains("focusing")) {
        const auto& f = object_at(j, "focusing", "focusing");
        reject_unknown(f, "focusing", {"method", "grid_points", "fir_taps_per_factor", "focus"});
        if (f.contains("method")) {
            if (j.contains("methods")) config_fail("focusing.method", "give either methods or focusing.method, not both");
            s.methods = {parse_method(get_as<std::string>(f, "method", "focusing.method"))};
        }
        read_opt(f, "grid_points", "focusing.grid_points", s.grid_points);
        read_opt(f, "fir_taps_per_factor", "focusing.fir_taps_per_factor", s.fir_taps_per_factor);
        read_opt(f, "focus", "focusing.focus", s.focus);
    }
    if (j.contains("music")) {
        const auto& m = object_at(j, "music", "music");
        reject_unknown(m, "music", {"grid_step", "oracle_source_count"});
        read_opt(m, "grid_step", "music.grid_step", s.music_grid_step);
        read_opt(m, "oracle_source_count", "music.oracle_source_count", s.oracle_source_count);
    }
    if (j.contains("estimation")) {
        const auto& e = object_at(j, "estimation", "estimation");
        reject_unknown(e, "estimation", {"effective_snapshots", "nb_snapshot_factor"});
        read_opt(e, "effective_snapshots", "estimation.effective_snapshots", s.effective_snapshots);
        read_opt(e, "nb_snapshot_factor", "estimation.nb_snapshot_factor", s.nb_snapshot_factor);
    }
    if (j.contains("sweep")) {
        const auto& w = object_at(j, "sweep", "sweep");
        reject_unknown(w, "sweep", {"param", "values"});
        const auto p = get_as<std::string>(w, "param", "sweep.param");
        if (p == "snapshots_per_sensor") s.sweep_param = SweepParam::SnapshotsPerSensor;
        else if (p == "snr_db") s.sweep_param = SweepParam::SnrDb;
        else if (p == "separation") s.sweep_param = SweepParam::Separation;
        else config_fail("sweep.param", "expected snapshots_per_sensor, snr_db or separation");
        read_opt(w, "values", "sweep.values", s.sweep_values);
    }
    if (j.contains("outputs")) {
        const auto& o = object_at(j, "outputs", "outputs");
        reject_unknown(o, "outputs", {"doa", "spectra", "curves"});
        read_opt(o, "doa", "outputs.doa", s.estimate_doa);
        read_opt(o, "spectra", "outputs.spectra", s.keep_spectra);
        read_opt(o, "curves", "outputs.curves", s.keep_curves);
    }
    s.validate();
    return s;
}

/// Parses a JSON config, reporting syntax errors with a line number.
inline Scenario scenario_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw Error(Errc::ConfigError, "line " + std::to_string(line) + ": " + e.what());
    }
    return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, "cannot open config file '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_string(text);
}

inline nlohmann::json to_json(const Scenario& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["geometry"] = {{"sensors", s.sensors}, {"design_freq_hz", s.design_freq_hz}, {"speed_mps", s.speed_mps}};
    j["sources"] = nlohmann::json::array();
    for (const auto& src : s.sources) j["sources"].push_back({{"u", src.u}, {"snr_db", src.snr_db}});
    j["band"] = {{"f_min_hz", s.f_min_hz}, {"f_max_hz", s.f_max_hz}, {"num_bands", s.num_bands}};
    j["snapshots_per_sensor"] = s.snapshots_per_sensor;
    std::vector<std::string> methods;
    for (auto m : s.methods) methods.push_back(to_string(m));
    j["methods"] = methods;
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["criterion"] = to_string(s.criterion);
    j["focusing"] = {{"grid_points", s.grid_points}, {"fir_taps_per_factor", s.fir_taps_per_factor}};
    if (!s.focus.empty()) j["focusing"]["focus"] = s.focus;
    j["music"] = {{"grid_step", s.music_grid_step}, {"oracle_source_count", s.oracle_source_count}};
    j["estimation"] = {{"effective_snapshots", s.effective_snapshots}, {"nb_snapshot_factor", s.nb_snapshot_factor}};
    j["sweep"] = {{"param", to_string(s.sweep_param)}, {"values", s.sweep_points()}};
    j["outputs"] = {{"doa", s.estimate_doa}, {"spectra", s.keep_spectra}, {"curves", s.keep_curves}};
    return j;
}

// ---------------------------------------------------------------------------
// Presets for the MRA6 broadband studies (80-120 Hz, 41 bands, d = lambda/2 at
// 100 Hz, equal-power sources).

/// Nine-source layout: broadside, four points partitioning theta in (90, 135]
/// degrees, four points partitioning u in (0, 0.7].
inline std::vector<double> nine_source_doas() {
    std::vector<double> u{0.0};
    for (int i = 1; i <= 4; ++i) u.push_back(std::cos((90.0 + 11.25 * i) * pi / 180.0));
    for (int i = 1; i <= 4; ++i) u.push_back(0.175 * i);
    return u;
}

inline std::vector<std::string> preset_names() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6a", "fig6b", "fig7a", "fig7b"};
}

inline Scenario preset(const std::string& requested) {
    std::string name = requested;
    if (name == "fig6") name = "fig6a";
    if (name == "fig7") name = "fig7a";

    Scenario s;
    s.name = name;
    s.seed = 20190917;
    auto two = [&](double sep) { s.sources = {{0.0, 0.0}, {sep, 0.0}}; };
    auto nine = [&](double snr) {
        s.sources.clear();
        for (double u : nine_source_doas()) s.sources.push_back({u, snr});
    };
    auto range = [](double lo, double hi, double step) {
        std::vector<double> v;
        for (int i = 0; lo + i * step <= hi + 1e-9; ++i) v.push_back(std::round((lo + i * step) * 1e6) / 1e6);
        return v;
    };

    if (name == "fig2") {  // criterion realizations, two sources
        two(0.06);
        s.snapshots_per_sensor = 3;
        s.sweep_param = SweepParam::Separation;
        s.sweep_values = {0.06, 0.3};
        s.estimate_doa = false;
        s.keep_spectra = false;
    } else if (name == "fig3") {  // MUSIC spectra, two close sources
        two(0.06);
        s.snapshots_per_sensor = 3;
        s.sweep_values = {3};
    } else if (name == "fig4") {  // resolution and RMSE versus separation
        two(0.06);
        s.snapshots_per_sensor = 5;
        s.sweep_param = SweepParam::Separation;
        s.sweep_values = range(0.01, 0.1, 0.01);
        s.keep_spectra = false;
    } else if (name == "fig5") {  // criterion realizations, nine sources
        nine(0.0);
        s.sweep_values = {3, 10};
        s.estimate_doa = false;
        s.keep_spectra = false;
    } else if (name == "fig6a") {  // detection versus snapshots
        nine(0.0);
        s.sweep_values = range(1, 10, 1);
        s.estimate_doa = false;
        s.keep_spectra = false;
    } else if (name == "fig6b") {  // detection versus SNR
        nine(0.0);
        s.snapshots_per_sensor = 5;
        s.sweep_param = SweepParam::SnrDb;
        s.sweep_values = range(-15, 6, 3);
        s.estimate_doa = false;
        s.keep_spectra = false;
    } else if (name == "fig7a") {  // RMSE versus snapshots at -5 dB
        nine(-5.0);
        s.sweep_values = range(1, 10, 1);
        s.keep_spectra = false;
    } else if (name == "fig7b") {  // RMSE versus SNR at 1 snapshot/sensor
        nine(0.0);
        s.snapshots_per_sensor = 1;
        s.sweep_param = SweepParam::SnrDb;
        s.sweep_values = range(-15, 10, 5);
        s.keep_spectra = false;
    } else {
        throw Error(Errc::UnknownPreset, "no preset named '" + requested + "'");
    }
    s.validate();
    return s;
}

}  // namespace sparsefocus::harness
