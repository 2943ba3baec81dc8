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
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "random.hpp"
#include "types.hpp"

namespace sparsefocus {

/// Broadband planewave source with flat power across the band.
struct SourceSpec {
    double u = 0.0;      ///< directional cosine
    double power = 1.0;  ///< per-band variance

    static SourceSpec from_snr_db(double u, double snr_db, double noise_power = 1.0) {
        return {u, noise_power * std::pow(10.0, snr_db / 10.0)};
    }
};

/// Band centres f_1..f_M spaced uniformly over [f_min, f_max], endpoints included.
class BandPlan {
public:
    BandPlan(double f_min, double f_max, int num_bands) : f_min_(f_min), f_max_(f_max) {
        if (!(f_min > 0.0) || !(f_max >= f_min))
            throw Error(Errc::InvalidArgument, "band requires 0 < f_min <= f_max");
        if (num_bands < 1) throw Error(Errc::InvalidArgument, "band count must be at least 1");
        if (num_bands == 1 && f_max != f_min)
            throw Error(Errc::InvalidArgument, "a single band needs f_min == f_max");
        freqs_.resize(static_cast<std::size_t>(num_bands));
        for (int m = 0; m < num_bands; ++m)
            freqs_[static_cast<std::size_t>(m)] =
                num_bands == 1 ? f_min : f_min + (f_max - f_min) * m / (num_bands - 1);
        freqs_.back() = f_max;
    }

    static BandPlan single(double freq_hz) { return BandPlan(freq_hz, freq_hz, 1); }

    double f_min() const noexcept { return f_min_; }
    double f_max() const noexcept { return f_max_; }
    double center() const noexcept { return 0.5 * (f_min_ + f_max_); }
    int size() const noexcept { return static_cast<int>(freqs_.size()); }
    double frequency(int m) const { return freqs_.at(static_cast<std::size_t>(m)); }
    const std::vector<double>& frequencies() const noexcept { return freqs_; }

private:
    double f_min_;
    double f_max_;
    std::vector<double> freqs_;
};

/// DFT-coefficient cube: one N x L matrix per band.
class FrequencySnapshots {
public:
    FrequencySnapshots(std::vector<CMatrix> bands, BandPlan plan) : bands_(std::move(bands)), plan_(std::move(plan)) {
        if (static_cast<int>(bands_.size()) != plan_.size())
            throw Error(Errc::DimensionMismatch, "band count differs from band plan");
        for (const auto& b : bands_)
            if (b.rows() != bands_.front().rows() || b.cols() != bands_.front().cols())
                throw Error(Errc::DimensionMismatch, "bands have inconsistent shapes");
        if (bands_.front().cols() < 1) throw Error(Errc::DimensionMismatch, "need at least one snapshot");
    }

    int sensors() const noexcept { return static_cast<int>(bands_.front().rows()); }
    int snapshots() const noexcept { return static_cast<int>(bands_.front().cols()); }
    int bands() const noexcept { return static_cast<int>(bands_.size()); }
    const BandPlan& band_plan() const noexcept { return plan_; }
    const CMatrix& band(int m) const { return bands_.at(static_cast<std::size_t>(m)); }

private:
    std::vector<CMatrix> bands_;
    BandPlan plan_;
};

namespace detail {

// Circular complex Gaussian with the given variance.
inline cdouble draw_cn(Engine& rng, std::normal_distribution<double>& unit, double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = unit(rng);
    const double im = unit(rng);
    return {s * re, s * im};
}

}  // namespace detail

/// Draws x_l(f_m) = A(f_m) s_l(f_m) + n_l(f_m) directly in the frequency domain.
inline FrequencySnapshots generate_snapshots(const ArrayGeometry& geom, std::span<const SourceSpec> sources,
                                             const BandPlan& plan, int num_snapshots, double noise_power,
                                             Engine& rng) {
    if (num_snapshots < 1) throw Error(Errc::DimensionMismatch, "snapshot count must be at least 1");
    if (noise_power < 0.0) throw Error(Errc::InvalidArgument, "noise power must be nonnegative");
    for (const auto& s : sources)
        if (!(s.power > 0.0) || !(std::abs(s.u) <= 1.0))
            throw Error(Errc::InvalidArgument, "source needs power > 0 and |u| <= 1");

    const int n_sensors = geom.size();
    const int n_sources = static_cast<int>(sources.size());
    std::normal_distribution<double> unit(0.0, 1.0);
    std::vector<CMatrix> bands;
    bands.reserve(static_cast<std::size_t>(plan.size()));

    for (int m = 0; m < plan.size(); ++m) {
        CMatrix manifold(n_sensors, n_sources);
        for (int i = 0; i < n_sources; ++i)
            manifold.col(i) = steering_vector(geom, plan.frequency(m), sources[static_cast<std::size_t>(i)].u);

        CMatrix amplitudes(n_sources, num_snapshots);
        CMatrix noise(n_sensors, num_snapshots);
        for (int l = 0; l < num_snapshots; ++l) {
            for (int i = 0; i < n_sources; ++i)
                amplitudes(i, l) = detail::draw_cn(rng, unit, sources[static_cast<std::size_t>(i)].power);
            for (int n = 0; n < n_sensors; ++n) noise(n, l) = detail::draw_cn(rng, unit, noise_power);
        }
        CMatrix x = noise;
        if (n_sources > 0) x.noalias() += manifold * amplitudes;
        bands.push_back(std::move(x));
    }
    return FrequencySnapshots(std::move(bands), plan);
}

inline FrequencySnapshots generate_snapshots(const ArrayGeometry& geom, std::span<const SourceSpec> sources,
                                             const BandPlan& plan, int num_snapshots, double noise_power,
                                             std::uint64_t seed) {
    Engine rng = make_engine(seed);
    return generate_snapshots(geom, sources, plan, num_snapshots, noise_power, rng);
}

/// R = sum_i sigma_i^2 a(u_i) a(u_i)^H + sigma_n^2 I at one frequency.
inline CMatrix ensemble_covariance(const ArrayGeometry& geom, std::span<const SourceSpec> sources, double freq_hz,
                                   double noise_power) {
    CMatrix r = CMatrix::Identity(geom.size(), geom.size()) * noise_power;
    for (const auto& s : sources) {
        const CVector a = steering_vector(geom, freq_hz, s.u);
        r.noalias() += s.power * (a * a.adjoint());
    }
    return r;
}

}  // namespace sparsefocus
