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

#include <cmath>
#include <span>
#include <vector>

#include "correlation.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "synthesis.hpp"
#include "types.hpp"

// Periodogram averaging: per-band conventional beamformer spectra are averaged
// over the band and inverted back to coarray lags at a single focus frequency.

namespace sparsefocus {

inline constexpr int default_ap_grid_points = 4096;

/// t(u) = w(u)^H R w(u) with w(u) the unnormalized steering vector at freq_hz.
/// Identical to (1/L) sum_l |w^H x_l|^2 when R is the sample covariance.
inline SpatialSpectrum beamformer_periodogram(const CMatrix& r, const ArrayGeometry& geom, double freq_hz,
                                              const UGrid& grid) {
    const int n = geom.size();
    if (r.rows() != n || r.cols() != n) throw Error(Errc::DimensionMismatch, "covariance size differs from array");
    const double phase = geom.lag_phase(freq_hz);
    const auto& idx = geom.sensor_indices();

    double diag = 0.0;
    for (int i = 0; i < n; ++i) diag += r(i, i).real();

    SpatialSpectrum out(grid);
    std::vector<cdouble> w(static_cast<std::size_t>(n));
    std::vector<cdouble> step(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) step[static_cast<std::size_t>(i)] = phasor(phase * idx[static_cast<std::size_t>(i)] * grid.step());

    constexpr int resync = 64;  // recompute exact phasors periodically to bound drift
    for (int g = 0; g < grid.size(); ++g) {
        if (g % resync == 0) {
            for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = phasor(phase * idx[static_cast<std::size_t>(i)] * grid[g]);
        } else {
            for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] *= step[static_cast<std::size_t>(i)];
        }
        double off = 0.0;
        for (int a = 0; a < n; ++a) {
            cdouble row = 0.0;
            for (int b = a + 1; b < n; ++b) row += r(a, b) * w[static_cast<std::size_t>(b)];
            off += (std::conj(w[static_cast<std::size_t>(a)]) * row).real();
        }
        out.values[static_cast<std::size_t>(g)] = diag + 2.0 * off;
    }
    return out;
}

/// Narrowband spatial periodogram of band m.
inline SpatialSpectrum narrowband_periodogram(const FrequencySnapshots& snapshots, int m, const ArrayGeometry& geom,
                                              const UGrid& grid) {
    return beamformer_periodogram(sample_covariance(snapshots, m), geom, snapshots.band_plan().frequency(m), grid);
}

/// Arithmetic mean of per-band spectra sharing one grid.
inline SpatialSpectrum average_periodogram(std::span<const SpatialSpectrum> bands) {
    if (bands.empty()) throw Error(Errc::InvalidArgument, "no spectra to average");
    SpatialSpectrum out(bands.front().grid);
    for (const auto& b : bands) {
        if (!(b.grid == out.grid)) throw Error(Errc::GridMismatch, "spectra are on different grids");
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    }
    const double inv = 1.0 / static_cast<double>(bands.size());
    for (double& v : out.values) v *= inv;
    return out;
}

/// Inverse spatial transform of t(u) at focus_hz, normalized by coarray weight.
///
/// r(k) = (1/eta(k)) (1/2) int_{-1}^{1} t(u) exp(j phi k u) du, phi = 2 pi f d / c,
/// integrated with the trapezoid rule on the spectrum's grid. Negative lags are
/// the conjugates of positive ones.
inline CorrelationVector ap_correlations(const SpatialSpectrum& t, const Coarray& coarray, const ArrayGeometry& geom,
                                         double focus_hz) {
    const int p = coarray.P();
    const UGrid& grid = t.grid;
    const double h = grid.step();
    const double phase = geom.lag_phase(focus_hz);

    std::vector<cdouble> acc(static_cast<std::size_t>(p), 0.0);
    for (int g = 0; g < grid.size(); ++g) {
        const double weight = (g == 0 || g == grid.size() - 1) ? 0.5 * h : h;
        const double tv = weight * t.values[static_cast<std::size_t>(g)];
        const cdouble base = phasor(phase * grid[g]);
        cdouble e = 1.0;
        for (int k = 0; k < p; ++k) {
            acc[static_cast<std::size_t>(k)] += tv * e;
            e *= base;
        }
    }

    CorrelationVector out(p, focus_hz, true);
    for (int k = 0; k < p; ++k) out.at(k) = 0.5 * acc[static_cast<std::size_t>(k)] / static_cast<double>(coarray.weight(k));
    out.mirror_from_right();
    return out;
}

/// Full AP pipeline from per-band sample covariances.
inline CorrelationVector ap_focus(std::span<const CMatrix> band_covariances, const BandPlan& plan,
                                  const ArrayGeometry& geom, const Coarray& coarray, const UGrid& grid,
                                  double focus_hz) {
    if (static_cast<int>(band_covariances.size()) != plan.size())
        throw Error(Errc::DimensionMismatch, "one covariance per band is required");
    SpatialSpectrum mean(grid);
    for (int m = 0; m < plan.size(); ++m) {
        const auto tm = beamformer_periodogram(band_covariances[static_cast<std::size_t>(m)], geom, plan.frequency(m), grid);
        for (std::size_t i = 0; i < mean.values.size(); ++i) mean.values[i] += tm.values[i];
    }
    for (double& v : mean.values) v /= plan.size();
    return ap_correlations(mean, coarray, geom, focus_hz);
}

inline CorrelationVector ap_focus(const FrequencySnapshots& snapshots, const ArrayGeometry& geom,
                                  const Coarray& coarray, const UGrid& grid, double focus_hz) {
    std::vector<CMatrix> scm;
    for (int m = 0; m < snapshots.bands(); ++m) scm.push_back(sample_covariance(snapshots, m));
    return ap_focus(scm, snapshots.band_plan(), geom, coarray, grid, focus_hz);
}

}  // namespace sparsefocus
