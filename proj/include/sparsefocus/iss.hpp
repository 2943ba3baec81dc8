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

#include "acm.hpp"
#include "correlation.hpp"
#include "estimation.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "synthesis.hpp"

// Incoherent reference: every band is processed on its own spatially smoothed
// ACM, and only the criterion curves and pseudo-spectra are averaged.

namespace sparsefocus {

struct IssAggregate {
    std::vector<EnumerationResult> per_band;
    EnumerationResult averaged;
};

/// Eigensystem of each band's spatially smoothed ACM.
inline std::vector<EigenSystem> iss_band_eigensystems(std::span<const CorrelationVector> band_correlations) {
    std::vector<EigenSystem> out;
    out.reserve(band_correlations.size());
    for (const auto& r : band_correlations) out.push_back(eig_sorted(spatial_smoothing_acm(r)));
    return out;
}

/// Per-band criteria on the square roots of the SS-ACM eigenvalues, averaged over bands.
inline IssAggregate iss_criteria(std::span<const EigenSystem> band_eigs, Criterion kind, double snapshots_per_band) {
    if (band_eigs.empty()) throw Error(Errc::InvalidArgument, "ISS needs at least one band");
    IssAggregate agg;
    for (const auto& es : band_eigs) {
        auto roots = es.magnitudes();
        for (double& v : roots) v = std::sqrt(v);
        agg.per_band.push_back(enumerate(kind, roots, snapshots_per_band));
    }
    agg.averaged = agg.per_band.front();
    for (std::size_t m = 1; m < agg.per_band.size(); ++m)
        for (std::size_t i = 0; i < agg.averaged.values.size(); ++i) agg.averaged.values[i] += agg.per_band[m].values[i];
    for (double& v : agg.averaged.values) v /= static_cast<double>(agg.per_band.size());
    agg.averaged.estimate = detail::argmin(agg.averaged.values) + agg.averaged.first_q;
    return agg;
}

/// Band-averaged MUSIC, each band using its own frequency's manifold.
inline MusicSpectrum iss_music(std::span<const EigenSystem> band_eigs, const BandPlan& plan, int num_sources,
                               const UGrid& grid, const ArrayGeometry& geom) {
    if (static_cast<int>(band_eigs.size()) != plan.size())
        throw Error(Errc::DimensionMismatch, "one eigensystem per band is required");
    MusicSpectrum out{SpatialSpectrum(grid), plan.center(), num_sources, 0};
    for (int m = 0; m < plan.size(); ++m) {
        const auto band = music_spectrum(band_eigs[static_cast<std::size_t>(m)], num_sources, grid, geom, plan.frequency(m));
        for (std::size_t i = 0; i < out.spectrum.values.size(); ++i) out.spectrum.values[i] += band.spectrum.values[i];
        out.clamped_points += band.clamped_points;
    }
    for (double& v : out.spectrum.values) v /= static_cast<double>(plan.size());
    return out;
}

inline std::vector<CorrelationVector> band_correlations(const FrequencySnapshots& snapshots, const Coarray& coarray) {
    std::vector<CorrelationVector> out;
    for (int m = 0; m < snapshots.bands(); ++m)
        out.push_back(coarray_correlation(sample_covariance(snapshots, m), coarray, snapshots.band_plan().frequency(m)));
    return out;
}

inline EnumerationResult iss_enumerate(const FrequencySnapshots& snapshots, const Coarray& coarray, Criterion kind) {
    const auto eigs = iss_band_eigensystems(band_correlations(snapshots, coarray));
    return iss_criteria(eigs, kind, snapshots.snapshots()).averaged;
}

inline MusicSpectrum iss_music(const FrequencySnapshots& snapshots, const ArrayGeometry& geom, const Coarray& coarray,
                               int num_sources, const UGrid& grid) {
    const auto eigs = iss_band_eigensystems(band_correlations(snapshots, coarray));
    return iss_music(eigs, snapshots.band_plan(), num_sources, grid, geom);
}

}  // namespace sparsefocus
