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
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace sparsefocus {

/// Sparse linear array whose sensors sit on an integer lattice of spacing d.
///
/// Sensor n is located at sensor_indices[n] * d. The design frequency is the
/// one at which d is half a wavelength, c / (2 d); every phase in the library
/// is expressed relative to it.
class ArrayGeometry {
public:
    ArrayGeometry(std::vector<int> sensor_indices, double spacing_m, double speed_mps)
        : indices_(std::move(sensor_indices)), spacing_(spacing_m), speed_(speed_mps) {
        if (indices_.empty())
            throw Error(Errc::InvalidArgument, "array needs at least one sensor");
        if (indices_.front() < 0)
            throw Error(Errc::InvalidArgument, "sensor lattice indices must be nonnegative");
        for (std::size_t n = 1; n < indices_.size(); ++n)
            if (indices_[n] <= indices_[n - 1])
                throw Error(Errc::InvalidArgument, "sensor lattice indices must be strictly increasing");
        if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
            throw Error(Errc::InvalidArgument, "spacing must be positive");
        if (!(speed_ > 0.0) || !std::isfinite(speed_))
            throw Error(Errc::InvalidArgument, "propagation speed must be positive");
    }

    /// Geometry with d chosen as half a wavelength at design_freq_hz.
    static ArrayGeometry half_wavelength(std::vector<int> sensor_indices, double design_freq_hz,
                                         double speed_mps) {
        if (!(design_freq_hz > 0.0))
            throw Error(Errc::InvalidArgument, "design frequency must be positive");
        return ArrayGeometry(std::move(sensor_indices), speed_mps / (2.0 * design_freq_hz), speed_mps);
    }

    const std::vector<int>& sensor_indices() const noexcept { return indices_; }
    int size() const noexcept { return static_cast<int>(indices_.size()); }
    double spacing() const noexcept { return spacing_; }
    double speed() const noexcept { return speed_; }
    double design_frequency() const noexcept { return speed_ / (2.0 * spacing_); }
    double position(int n) const { return indices_.at(static_cast<std::size_t>(n)) * spacing_; }

    /// Phase advance per lattice step and unit directional cosine: 2 pi f d / c.
    double lag_phase(double freq_hz) const noexcept { return 2.0 * pi * freq_hz * spacing_ / speed_; }

private:
    std::vector<int> indices_;
    double spacing_;
    double speed_;
};

inline constexpr double default_speed_mps = 1500.0;
inline constexpr double default_design_freq_hz = 100.0;

/// Six-sensor minimum redundancy array at lattice positions [1,2,5,6,12,14].
inline ArrayGeometry make_mra6(double design_freq_hz = default_design_freq_hz,
                               double speed_mps = default_speed_mps) {
    return ArrayGeometry::half_wavelength({1, 2, 5, 6, 12, 14}, design_freq_hz, speed_mps);
}

/// Two-level nested array: a dense ULA of `inner` sensors followed by a sparse
/// ULA of `outer` sensors at spacing inner+1.
inline ArrayGeometry make_nested(int inner, int outer, double design_freq_hz = default_design_freq_hz,
                                 double speed_mps = default_speed_mps) {
    if (inner < 1 || outer < 1)
        throw Error(Errc::InvalidArgument, "nested array subarray sizes must be positive");
    std::vector<int> idx;
    for (int i = 1; i <= inner; ++i) idx.push_back(i);
    for (int m = 1; m <= outer; ++m) idx.push_back(m * (inner + 1));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return ArrayGeometry::half_wavelength(std::move(idx), design_freq_hz, speed_mps);
}

/// Extended coprime array: {M n : 0 <= n < N} union {N m : 0 <= m < 2M}, gcd(M,N) = 1.
inline ArrayGeometry make_coprime(int m_factor, int n_factor, double design_freq_hz = default_design_freq_hz,
                                  double speed_mps = default_speed_mps) {
    if (m_factor < 1 || n_factor < 1 || std::gcd(m_factor, n_factor) != 1)
        throw Error(Errc::InvalidArgument, "coprime factors must be positive and coprime");
    std::vector<int> idx;
    for (int n = 0; n < n_factor; ++n) idx.push_back(m_factor * n);
    for (int m = 0; m < 2 * m_factor; ++m) idx.push_back(n_factor * m);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return ArrayGeometry::half_wavelength(std::move(idx), design_freq_hz, speed_mps);
}

/// Difference coarray of a lattice array.
///
/// Lags cover the full coarray [-max_lag, max_lag]; P is the length of the
/// contiguous run 0..P-1 starting at the origin. pairs(-k) lists the pairs of
/// pairs(k) swapped, in the same order.
class Coarray {
public:
    using SensorPair = std::pair<int, int>;

    int P() const noexcept { return contiguous_; }
    int max_lag() const noexcept { return max_lag_; }

    int weight(int lag) const {
        if (lag < -max_lag_ || lag > max_lag_) return 0;
        return static_cast<int>(pairs_[static_cast<std::size_t>(lag + max_lag_)].size());
    }

    const std::vector<SensorPair>& pairs(int lag) const {
        if (lag < -max_lag_ || lag > max_lag_)
            throw Error(Errc::InvalidArgument, "lag outside coarray: " + std::to_string(lag));
        return pairs_[static_cast<std::size_t>(lag + max_lag_)];
    }

    /// Sum of weights over the full coarray; equals N^2.
    int total_weight() const {
        int total = 0;
        for (const auto& p : pairs_) total += static_cast<int>(p.size());
        return total;
    }

    friend Coarray difference_coarray(const ArrayGeometry& geom);

private:
    int contiguous_ = 0;
    int max_lag_ = 0;
    std::vector<std::vector<SensorPair>> pairs_;
};

inline Coarray difference_coarray(const ArrayGeometry& geom) {
    const auto& idx = geom.sensor_indices();
    const int n_sensors = geom.size();
    Coarray co;
    co.max_lag_ = idx.back() - idx.front();
    co.pairs_.assign(static_cast<std::size_t>(2 * co.max_lag_ + 1), {});

    // Nonnegative lags first; negative lags are the swapped pairs in matching order.
    for (int n1 = 0; n1 < n_sensors; ++n1)
        for (int n2 = 0; n2 < n_sensors; ++n2) {
            const int lag = idx[static_cast<std::size_t>(n1)] - idx[static_cast<std::size_t>(n2)];
            if (lag >= 0) co.pairs_[static_cast<std::size_t>(lag + co.max_lag_)].emplace_back(n1, n2);
        }
    for (int lag = 1; lag <= co.max_lag_; ++lag) {
        auto& neg = co.pairs_[static_cast<std::size_t>(co.max_lag_ - lag)];
        for (const auto& [a, b] : co.pairs_[static_cast<std::size_t>(co.max_lag_ + lag)]) neg.emplace_back(b, a);
    }

    int run = 0;
    while (run <= co.max_lag_ && co.weight(run) > 0) ++run;
    if (n_sensors > 1 && run < 2)
        throw Error(Errc::NonContiguousAtOrigin, "coarray lag 1 is missing");
    co.contiguous_ = run;
    return co;
}

/// Array manifold column at frequency f for directional cosine u.
inline CVector steering_vector(const ArrayGeometry& geom, double freq_hz, double u) {
    if (!(std::abs(u) <= 1.0)) throw Error(Errc::InvalidArgument, "directional cosine outside [-1,1]");
    if (!(freq_hz > 0.0)) throw Error(Errc::InvalidArgument, "frequency must be positive");
    const double step = geom.lag_phase(freq_hz) * u;
    CVector a(geom.size());
    for (int n = 0; n < geom.size(); ++n) a(n) = phasor(step * geom.sensor_indices()[static_cast<std::size_t>(n)]);
    return a;
}

}  // namespace sparsefocus
