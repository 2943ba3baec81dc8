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
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "synthesis.hpp"
#include "types.hpp"

namespace sparsefocus {

/// Coarray correlation r(k) for k = -(P-1)..(P-1).
///
/// `freq_hz` is the band the estimate belongs to, or the focus frequency when
/// `focused` is set.
struct CorrelationVector {
    int P = 0;
    std::vector<cdouble> values;
    double freq_hz = 0.0;
    bool focused = false;

    CorrelationVector() = default;
    CorrelationVector(int p, double freq, bool is_focused = false)
        : P(p), values(static_cast<std::size_t>(2 * p - 1)), freq_hz(freq), focused(is_focused) {
        if (p < 1) throw Error(Errc::InvalidArgument, "correlation span must be at least 1");
    }

    cdouble& at(int lag) { return values.at(static_cast<std::size_t>(lag + P - 1)); }
    cdouble at(int lag) const { return values.at(static_cast<std::size_t>(lag + P - 1)); }

    /// Fills negative lags from positive ones and makes r(0) real.
    void mirror_from_right() {
        at(0) = at(0).real();
        for (int k = 1; k < P; ++k) at(-k) = std::conj(at(k));
    }
};

/// (1/L) sum_l x_l x_l^H for band m. Exactly Hermitian by construction.
inline CMatrix sample_covariance(const CMatrix& x) {
    const Eigen::Index n = x.rows();
    const double inv_l = 1.0 / static_cast<double>(x.cols());
    CMatrix r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r(i, i) = x.row(i).squaredNorm() * inv_l;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const cdouble v = x.row(i).dot(x.row(j)) * inv_l;  // conj(x_i) . x_j
            r(j, i) = v;
            r(i, j) = std::conj(v);
        }
    }
    return r;
}

inline CMatrix sample_covariance(const FrequencySnapshots& snapshots, int m) {
    return sample_covariance(snapshots.band(m));
}

/// Redundancy-averaged correlation over the contiguous coarray.
inline CorrelationVector coarray_correlation(const CMatrix& r, const Coarray& coarray, double freq_hz = 0.0) {
    const int p = coarray.P();
    CorrelationVector out(p, freq_hz);
    for (int k = -(p - 1); k < p; ++k) {
        cdouble acc = 0.0;
        const auto& pairs = coarray.pairs(k);
        for (const auto& [n1, n2] : pairs) acc += r(n1, n2);
        out.at(k) = acc / static_cast<double>(pairs.size());
    }
    return out;
}

/// (1/P) sum_i v_i v_i^H with v_i the i-th length-P window of the lag axis.
inline CMatrix spatial_smoothing_acm(const CorrelationVector& r) {
    const int p = r.P;
    if (static_cast<int>(r.values.size()) != 2 * p - 1)
        throw Error(Errc::MissingLags, "correlation vector does not span +-(P-1)");
    CMatrix out = CMatrix::Zero(p, p);
    CVector v(p);
    for (int i = 1; i <= p; ++i) {
        // Window i holds lags (1-i) .. (P-i).
        for (int a = 0; a < p; ++a) v(a) = r.at(a + 1 - i);
        out.noalias() += v * v.adjoint();
    }
    return out / static_cast<double>(p);
}

}  // namespace sparsefocus
