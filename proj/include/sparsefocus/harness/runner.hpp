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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "../acm.hpp"
#include "../correlation.hpp"
#include "../estimation.hpp"
#include "../focusing.hpp"
#include "../geometry.hpp"
#include "../grid.hpp"
#include "../iss.hpp"
#include "../metrics.hpp"
#include "../random.hpp"
#include "../resampling.hpp"
#include "../synthesis.hpp"
#include "scenario.hpp"

namespace sparsefocus::harness {

/// One method's outcome in one Monte Carlo trial.
struct MethodTrial {
    int q_mdl = 0;
    int q_mdl_gap = 0;
    std::vector<double> mdl_curve;
    std::vector<double> mdl_gap_curve;
    std::vector<double> doas;  ///< matched to truths, truth order
    double squared_error = 0.0;
    std::optional<bool> resolved;
    std::vector<double> spectrum;
    int clamped_points = 0;
};

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    int q_mdl = 0;
    int q_mdl_gap = 0;
    std::optional<bool> resolved;
    std::vector<double> doas;
};

struct MethodSummary {
    Method method = Method::AP;
    int trials = 0;
    double detection = 0.0;
    double detection_se = 0.0;
    std::optional<double> resolution;
    std::optional<double> resolution_se;
    std::optional<double> rmse;
    std::optional<double> rmse_se;
    std::vector<double> mdl_mean, mdl_se, mdl_gap_mean, mdl_gap_se;
    std::vector<double> spectrum_mean;
    std::vector<TrialRecord> records;
    long clamped_points = 0;
};

struct PointResult {
    double sweep_value = 0.0;
    int snapshots = 0;
    int nb_snapshots = 0;
    std::vector<double> truths;
    std::vector<MethodSummary> methods;

    const MethodSummary& method(Method m) const {
        for (const auto& s : methods)
            if (s.method == m) return s;
        throw Error(Errc::InvalidArgument, "method " + to_string(m) + " was not run");
    }
};

struct ScenarioReport {
    Scenario scenario;
    std::vector<double> spectrum_grid;
    std::vector<PointResult> points;
};

struct RunOptions {
    int jobs = 0;  ///< 0 = hardware concurrency
    std::function<void(int point, int done, int total)> progress;
};

namespace detail {

/// Everything that is fixed for one sweep point.
struct PointSetup {
    const Scenario& scenario;
    double sweep_value;
    ArrayGeometry geom;
    Coarray coarray;
    BandPlan plan;
    std::vector<SourceSpec> sources;
    std::vector<double> truths;  // sorted
    int snapshots;
    int nb_snapshots;
    UGrid ap_grid;
    UGrid music_grid;
    double ap_focus_hz;
    double scr_focus_hz;
    std::optional<ResamplingBank> scr_bank;

    PointSetup(const Scenario& s, double value)
        : scenario(s),
          sweep_value(value),
          geom(ArrayGeometry::half_wavelength(s.sensors, s.design_freq_hz, s.speed_mps)),
          coarray(difference_coarray(geom)),
          plan(s.f_min_hz, s.f_max_hz, s.num_bands),
          snapshots(s.snapshots_for(s.sweep_param == SweepParam::SnapshotsPerSensor ? value : s.snapshots_per_sensor)),
          nb_snapshots(s.nb_snapshots_for(s.sweep_param == SweepParam::SnapshotsPerSensor ? value : s.snapshots_per_sensor)),
          ap_grid(s.grid_points),
          music_grid(UGrid::with_step(s.music_grid_step)),
          ap_focus_hz(resolve_focus(s.focus, plan, true)),
          scr_focus_hz(resolve_focus(s.focus, plan, false)) {
        for (std::size_t i = 0; i < s.sources.size(); ++i) {
            double u = s.sources[i].u;
            double snr = s.sources[i].snr_db;
            if (s.sweep_param == SweepParam::SnrDb) snr = value;
            if (s.sweep_param == SweepParam::Separation && i == 1) u = s.sources[0].u + value;
            sources.push_back(SourceSpec::from_snr_db(u, snr));
            truths.push_back(u);
        }
        std::sort(truths.begin(), truths.end());
        if (std::find(s.methods.begin(), s.methods.end(), Method::SCR) != s.methods.end()) {
            ResampleFilterSpec spec;
            spec.taps_per_factor = s.fir_taps_per_factor;
            scr_bank.emplace(plan, scr_focus_hz, spec);
        }
    }

    static double resolve_focus(const std::string& focus, const BandPlan& plan, bool ap) {
        if (focus.empty()) return ap ? plan.center() : plan.f_min();
        if (focus == "center") return plan.center();
        if (focus == "min") return plan.f_min();
        return std::stod(focus.substr(3));
    }

    bool wants_music() const { return scenario.estimate_doa || scenario.keep_spectra; }

    int music_source_count(int estimate) const {
        const int d = scenario.oracle_source_count ? static_cast<int>(truths.size()) : estimate;
        return std::clamp(d, 1, coarray.P() - 1);
    }

    double coherent_l_eff() const {
        return scenario.effective_snapshots == "per_band" ? snapshots : static_cast<double>(snapshots) * plan.size();
    }

    void finish_doa(MethodTrial& out, const MusicSpectrum& ms) const {
        if (scenario.keep_spectra) out.spectrum = ms.spectrum.values;
        out.clamped_points = ms.clamped_points;
        if (!scenario.estimate_doa || truths.empty()) return;
        const auto peaks = pick_peaks(ms.spectrum, static_cast<int>(truths.size()));
        out.doas = match_estimates(peaks, truths);
        for (std::size_t d = 0; d < truths.size(); ++d) {
            const double e = out.doas[d] - truths[d];
            out.squared_error += e * e;
        }
        if (truths.size() == 2 && truths[0] < truths[1]) out.resolved = resolved(ms.spectrum, truths[0], truths[1]);
    }

    MethodTrial coherent(const CorrelationVector& r, double l_eff, double focus_hz) const {
        const auto acm = lra_acm(r);
        const auto es = eig_sorted(acm);
        const auto mags = es.magnitudes();
        MethodTrial out;
        auto a = mdl(mags, l_eff);
        auto b = mdl_gap(mags, l_eff);
        out.q_mdl = a.estimate;
        out.q_mdl_gap = b.estimate;
        out.mdl_curve = std::move(a.values);
        out.mdl_gap_curve = std::move(b.values);
        if (wants_music()) {
            const int d = music_source_count(scenario.criterion == Criterion::MDL ? out.q_mdl : out.q_mdl_gap);
            finish_doa(out, music_spectrum(es, d, music_grid, geom, focus_hz));
        }
        return out;
    }

    MethodTrial incoherent(std::span<const CorrelationVector> bands) const {
        const auto eigs = iss_band_eigensystems(bands);
        MethodTrial out;
        auto a = iss_criteria(eigs, Criterion::MDL, snapshots).averaged;
        auto b = iss_criteria(eigs, Criterion::MDLGap, snapshots).averaged;
        out.q_mdl = a.estimate;
        out.q_mdl_gap = b.estimate;
        out.mdl_curve = std::move(a.values);
        out.mdl_gap_curve = std::move(b.values);
        if (wants_music()) {
            const int d = music_source_count(scenario.criterion == Criterion::MDL ? out.q_mdl : out.q_mdl_gap);
            finish_doa(out, iss_music(eigs, plan, d, music_grid, geom));
        }
        return out;
    }

    std::vector<MethodTrial> run_trial(std::uint64_t trial_seed) const {
        const auto& methods = scenario.methods;
        const bool broadband = std::any_of(methods.begin(), methods.end(), [](Method m) { return m != Method::NB; });

        std::vector<CMatrix> scm;
        std::vector<CorrelationVector> corr;
        if (broadband) {
            Engine rng = make_engine(derive_seed(trial_seed, 1));
            const auto x = generate_snapshots(geom, sources, plan, snapshots, 1.0, rng);
            for (int m = 0; m < plan.size(); ++m) {
                scm.push_back(sample_covariance(x, m));
                corr.push_back(coarray_correlation(scm.back(), coarray, plan.frequency(m)));
            }
        }

        std::vector<MethodTrial> out;
        for (Method method : methods) {
            switch (method) {
            case Method::AP:
                out.push_back(coherent(ap_focus(scm, plan, geom, coarray, ap_grid, ap_focus_hz), coherent_l_eff(), ap_focus_hz));
                break;
            case Method::SCR:
                out.push_back(coherent(scr_bank->focus(corr), coherent_l_eff(), scr_focus_hz));
                break;
            case Method::ISS:
                out.push_back(incoherent(corr));
                break;
            case Method::NB: {
                Engine rng = make_engine(derive_seed(trial_seed, 2));
                const auto nb_plan = BandPlan::single(geom.design_frequency());
                const auto x = generate_snapshots(geom, sources, nb_plan, nb_snapshots, 1.0, rng);
                const auto r = coarray_correlation(sample_covariance(x, 0), coarray, nb_plan.frequency(0));
                out.push_back(coherent(r, nb_snapshots, nb_plan.frequency(0)));
                break;
            }
            }
        }
        return out;
    }
};

// Running sums folded in trial order.
struct Accumulator {
    long trials = 0, resolved = 0, resolution_trials = 0, clamped = 0;
    double sq_err = 0.0, sq_err_sq = 0.0;
    long doa_trials = 0;
    std::vector<double> mdl_sum, mdl_sq, gap_sum, gap_sq, spectrum_sum;
    std::vector<TrialRecord> records;

    static void add(std::vector<double>& sum, std::vector<double>& sq, const std::vector<double>& v) {
        if (sum.empty()) { sum.assign(v.size(), 0.0); sq.assign(v.size(), 0.0); }
        for (std::size_t i = 0; i < v.size(); ++i) { sum[i] += v[i]; sq[i] += v[i] * v[i]; }
    }

    void fold(const MethodTrial& t, int trial, std::uint64_t seed, int truth_count) {
        ++trials;
        clamped += t.clamped_points;
        add(mdl_sum, mdl_sq, t.mdl_curve);
        add(gap_sum, gap_sq, t.mdl_gap_curve);
        if (!t.spectrum.empty()) {
            if (spectrum_sum.empty()) spectrum_sum.assign(t.spectrum.size(), 0.0);
            for (std::size_t i = 0; i < t.spectrum.size(); ++i) spectrum_sum[i] += t.spectrum[i];
        }
        if (!t.doas.empty()) {
            const double per_trial = t.squared_error / truth_count;
            sq_err += per_trial;
            sq_err_sq += per_trial * per_trial;
            ++doa_trials;
        }
        if (t.resolved) {
            ++resolution_trials;
            if (*t.resolved) ++resolved;
        }
        records.push_back({trial, seed, t.q_mdl, t.q_mdl_gap, t.resolved, t.doas});
    }
};

inline std::vector<double> mean_of(const std::vector<double>& sum, long n) {
    std::vector<double> out(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) out[i] = sum[i] / static_cast<double>(n);
    return out;
}

inline std::vector<double> stderr_of(const std::vector<double>& sum, const std::vector<double>& sq, long n) {
    std::vector<double> out(sum.size(), 0.0);
    if (n < 2) return out;
    for (std::size_t i = 0; i < sum.size(); ++i) {
        const double mean = sum[i] / static_cast<double>(n);
        const double var = std::max(0.0, (sq[i] - n * mean * mean) / static_cast<double>(n - 1));
        out[i] = std::sqrt(var / static_cast<double>(n));
    }
    return out;
}

inline double proportion_se(double p, long n) { return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)); }

}  // namespace detail

/// Seed of trial `trial`; shared by every sweep point and method.
inline std::uint64_t trial_seed(std::uint64_t master, int trial) {
    return derive_seed(master, static_cast<std::uint64_t>(trial));
}

/// Runs every sweep point of a scenario. Results do not depend on `jobs`:
/// each trial draws from its own seeded stream and trials are folded in index
/// order.
inline ScenarioReport run_scenario(const Scenario& scenario, const RunOptions& options = {}) {
    scenario.validate();
    ScenarioReport report{scenario, {}, {}};
    const int jobs = options.jobs > 0 ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
    constexpr int chunk = 64;

    const auto values = scenario.sweep_points();
    for (std::size_t point = 0; point < values.size(); ++point) {
        const detail::PointSetup setup(scenario, values[point]);
        if (report.spectrum_grid.empty()) report.spectrum_grid = setup.music_grid.points();
        const std::size_t n_methods = scenario.methods.size();
        std::vector<detail::Accumulator> acc(n_methods);

        for (int start = 0; start < scenario.trials; start += chunk) {
            const int count = std::min(chunk, scenario.trials - start);
            std::vector<std::vector<MethodTrial>> results(static_cast<std::size_t>(count));
            std::atomic<int> next{0};
            std::exception_ptr failure;
            std::atomic<bool> failed{false};
            auto worker = [&] {
                for (int i = next++; i < count && !failed; i = next++) {
                    try {
                        results[static_cast<std::size_t>(i)] = setup.run_trial(trial_seed(scenario.seed, start + i));
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                    }
                }
            };
            if (jobs == 1) {
                worker();
            } else {
                std::vector<std::jthread> pool;
                for (int w = 0; w < std::min(jobs, count); ++w) pool.emplace_back(worker);
            }
            if (failure) std::rethrow_exception(failure);

            for (int i = 0; i < count; ++i)
                for (std::size_t m = 0; m < n_methods; ++m)
                    acc[m].fold(results[static_cast<std::size_t>(i)][m], start + i, trial_seed(scenario.seed, start + i),
                                static_cast<int>(setup.truths.size()));
            if (options.progress) options.progress(static_cast<int>(point), start + count, scenario.trials);
        }

        PointResult pr{values[point], setup.snapshots, setup.nb_snapshots, setup.truths, {}};
        const int d_true = static_cast<int>(setup.truths.size());
        for (std::size_t m = 0; m < n_methods; ++m) {
            const auto& a = acc[m];
            MethodSummary s;
            s.method = scenario.methods[m];
            s.trials = static_cast<int>(a.trials);
            long detected = 0;
            for (const auto& r : a.records)
                detected += ((scenario.criterion == Criterion::MDL ? r.q_mdl : r.q_mdl_gap) == d_true);
            s.detection = static_cast<double>(detected) / static_cast<double>(a.trials);
            s.detection_se = detail::proportion_se(s.detection, a.trials);
            if (a.resolution_trials > 0) {
                s.resolution = static_cast<double>(a.resolved) / static_cast<double>(a.resolution_trials);
                s.resolution_se = detail::proportion_se(*s.resolution, a.resolution_trials);
            }
            if (a.doa_trials > 0) {
                const double mse = a.sq_err / static_cast<double>(a.doa_trials);
                s.rmse = std::sqrt(mse);
                double se_mse = 0.0;
                if (a.doa_trials > 1) {
                    const double var = std::max(0.0, (a.sq_err_sq - a.doa_trials * mse * mse) / (a.doa_trials - 1));
                    se_mse = std::sqrt(var / static_cast<double>(a.doa_trials));
                }
                s.rmse_se = *s.rmse > 0.0 ? se_mse / (2.0 * *s.rmse) : 0.0;
            }
            if (scenario.keep_curves) {
                s.mdl_mean = detail::mean_of(a.mdl_sum, a.trials);
                s.mdl_se = detail::stderr_of(a.mdl_sum, a.mdl_sq, a.trials);
                s.mdl_gap_mean = detail::mean_of(a.gap_sum, a.trials);
                s.mdl_gap_se = detail::stderr_of(a.gap_sum, a.gap_sq, a.trials);
            }
            if (!a.spectrum_sum.empty()) s.spectrum_mean = detail::mean_of(a.spectrum_sum, a.trials);
            s.records = a.records;
            s.clamped_points = a.clamped;
            pr.methods.push_back(std::move(s));
        }
        report.points.push_back(std::move(pr));
    }
    return report;
}

}  // namespace sparsefocus::harness
