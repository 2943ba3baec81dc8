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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../error.hpp"
#include "runner.hpp"

namespace sparsefocus::harness {

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

namespace detail {

struct MetricRow {
    double sweep;
    Method method;
    double value;
    double se;
    int trials;
};

inline std::vector<MetricRow> metric_rows(const ScenarioReport& r, const std::string& metric) {
    std::vector<MetricRow> rows;
    for (const auto& p : r.points)
        for (const auto& m : p.methods) {
            if (metric == "detection_probability") rows.push_back({p.sweep_value, m.method, m.detection, m.detection_se, m.trials});
            else if (metric == "resolution_probability" && m.resolution)
                rows.push_back({p.sweep_value, m.method, *m.resolution, *m.resolution_se, m.trials});
            else if (metric == "rmse" && m.rmse)
                rows.push_back({p.sweep_value, m.method, *m.rmse, *m.rmse_se, m.trials});
        }
    return rows;
}

inline std::string xml_escape(const std::string& in) {
    std::string out;
    for (char c : in) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::ConfigError, "cannot write '" + path.string() + "'");
    return out;
}

}  // namespace detail

/// Metric table with header sweep_value,method,metric,stderr,trials.
inline void write_metric_csv(std::ostream& os, const ScenarioReport& r, const std::string& metric) {
    os << "sweep_value,method,metric,stderr,trials\n";
    for (const auto& row : detail::metric_rows(r, metric))
        os << fmt_num(row.sweep) << ',' << to_string(row.method) << ',' << fmt_num(row.value) << ','
           << fmt_num(row.se) << ',' << row.trials << '\n';
}

inline void write_curves_csv(std::ostream& os, const ScenarioReport& r) {
    os << "sweep_value,method,criterion,q,mean,stderr,trials\n";
    for (const auto& p : r.points)
        for (const auto& m : p.methods) {
            for (std::size_t i = 0; i < m.mdl_mean.size(); ++i)
                os << fmt_num(p.sweep_value) << ',' << to_string(m.method) << ",mdl," << i << ','
                   << fmt_num(m.mdl_mean[i]) << ',' << fmt_num(m.mdl_se[i]) << ',' << m.trials << '\n';
            for (std::size_t i = 0; i < m.mdl_gap_mean.size(); ++i)
                os << fmt_num(p.sweep_value) << ',' << to_string(m.method) << ",mdl_gap," << i + 1 << ','
                   << fmt_num(m.mdl_gap_mean[i]) << ',' << fmt_num(m.mdl_gap_se[i]) << ',' << m.trials << '\n';
        }
}

inline void write_spectra_csv(std::ostream& os, const ScenarioReport& r) {
    os << "sweep_value,method,u,mean,trials\n";
    for (const auto& p : r.points)
        for (const auto& m : p.methods)
            for (std::size_t i = 0; i < m.spectrum_mean.size(); ++i)
                os << fmt_num(p.sweep_value) << ',' << to_string(m.method) << ',' << fmt_num(r.spectrum_grid[i]) << ','
                   << fmt_num(m.spectrum_mean[i]) << ',' << m.trials << '\n';
}

/// Per-trial records; DOAs are truth-ordered and ';'-separated.
inline void write_trials_csv(std::ostream& os, const ScenarioReport& r) {
    os << "sweep_value,method,trial,seed,q_mdl,q_mdl_gap,resolved,doas\n";
    for (const auto& p : r.points)
        for (const auto& m : p.methods)
            for (const auto& t : m.records) {
                os << fmt_num(p.sweep_value) << ',' << to_string(m.method) << ',' << t.trial << ',' << t.seed << ','
                   << t.q_mdl << ',' << t.q_mdl_gap << ',' << (t.resolved ? (*t.resolved ? "1" : "0") : "") << ',';
                for (std::size_t i = 0; i < t.doas.size(); ++i) os << (i ? ";" : "") << fmt_num(t.doas[i]);
                os << '\n';
            }
}

/// Line plot of one metric against the sweep axis, one polyline per method.
inline void write_metric_svg(std::ostream& os, const ScenarioReport& r, const std::string& metric) {
    const auto rows = detail::metric_rows(r, metric);
    constexpr double width = 640, height = 420, left = 70, right = 130, top = 30, bottom = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = 0.0, y1 = metric == "rmse" ? 0.0 : 1.0;
    for (const auto& row : rows) {
        x0 = std::min(x0, row.sweep);
        x1 = std::max(x1, row.sweep);
        y1 = std::max(y1, row.value);
    }
    if (rows.empty()) { x0 = 0.0; x1 = 1.0; }
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) y1 = 1.0;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };
    const std::map<Method, const char*> colour{{Method::AP, "#1f77b4"}, {Method::SCR, "#d62728"},
                                               {Method::ISS, "#2ca02c"}, {Method::NB, "#7f7f7f"}};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left << "\" y=\"18\">" << detail::xml_escape(r.scenario.name) << ": " << metric << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << py(y0) << "\" x2=\"" << width - right << "\" y2=\"" << py(y0)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << py(y0) << "\" x2=\"" << left << "\" y2=\"" << py(y1)
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">" << fmt_num(xv)
           << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmt_num(yv) << "</text>\n";
    }
    os << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
       << to_string(r.scenario.sweep_param) << "</text>\n";
    int legend = 0;
    for (Method m : r.scenario.methods) {
        std::ostringstream pts;
        for (const auto& row : rows)
            if (row.method == m) pts << px(row.sweep) << ',' << py(row.value) << ' ';
        if (pts.str().empty()) continue;
        os << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << colour.at(m) << "\" points=\"" << pts.str()
           << "\"/>\n";
        const double ly = top + 20.0 * legend++;
        os << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 40 << "\" y2=\""
           << ly << "\" stroke-width=\"2\" stroke=\"" << colour.at(m) << "\"/>\n";
        os << "<text x=\"" << width - right + 46 << "\" y=\"" << ly + 4 << "\">" << to_string(m) << "</text>\n";
    }
    os << "</svg>\n";
}

/// Writes every table (and optionally SVG plots) into `dir`.
inline std::vector<std::filesystem::path> write_report(const ScenarioReport& r, const std::filesystem::path& dir,
                                                       bool plots = false) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, auto&& body) {
        auto out = detail::open_out(dir / name);
        body(out);
        written.push_back(dir / name);
    };
    emit("scenario.json", [&](std::ostream& os) { os << to_json(r.scenario).dump(2) << '\n'; });
    for (const std::string metric : {"detection_probability", "resolution_probability", "rmse"}) {
        if (detail::metric_rows(r, metric).empty()) continue;
        emit(metric + ".csv", [&](std::ostream& os) { write_metric_csv(os, r, metric); });
        if (plots) emit(metric + ".svg", [&](std::ostream& os) { write_metric_svg(os, r, metric); });
    }
    if (r.scenario.keep_curves) emit("criterion_curves.csv", [&](std::ostream& os) { write_curves_csv(os, r); });
    if (r.scenario.keep_spectra) emit("spectra.csv", [&](std::ostream& os) { write_spectra_csv(os, r); });
    emit("trials.csv", [&](std::ostream& os) { write_trials_csv(os, r); });
    return written;
}

}  // namespace sparsefocus::harness
