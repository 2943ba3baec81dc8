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
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "acm.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "types.hpp"

namespace sparsefocus {

/// Eigenpairs of a Hermitian matrix ordered by |lambda| descending
/// (ties broken by signed value, larger first).
struct EigenSystem {
    RVector eigvals;
    CMatrix eigvecs;

    int size() const noexcept { return static_cast<int>(eigvals.size()); }
    std::vector<double> magnitudes() const {
        std::vector<double> out(static_cast<std::size_t>(eigvals.size()));
        for (Eigen::Index i = 0; i < eigvals.size(); ++i) out[static_cast<std::size_t>(i)] = std::abs(eigvals(i));
        return out;
    }
};

inline EigenSystem eig_sorted(const CMatrix& r) {
    if (r.rows() != r.cols() || r.rows() == 0) throw Error(Errc::DimensionMismatch, "eigensolver needs a square matrix");
    const double scale = std::max(r.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error(Errc::InvalidArgument, "matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(r);
    if (solver.info() != Eigen::Success) throw Error(Errc::ConvergenceFailure, "Hermitian eigensolver did not converge");

    const RVector& vals = solver.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(vals.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ma = std::abs(vals(a)), mb = std::abs(vals(b));
        if (ma != mb) return ma > mb;
        return vals(a) > vals(b);
    });

    EigenSystem es{RVector(vals.size()), CMatrix(r.rows(), r.cols())};
    for (std::size_t i = 0; i < order.size(); ++i) {
        es.eigvals(static_cast<Eigen::Index>(i)) = vals(order[i]);
        es.eigvecs.col(static_cast<Eigen::Index>(i)) = solver.eigenvectors().col(order[i]);
    }
    return es;
}

inline EigenSystem eig_sorted(const AugmentedCovariance& acm) { return eig_sorted(acm.matrix); }

enum class Criterion { MDL, MDLGap };

/// Criterion curve over candidate source counts.
struct EnumerationResult {
    Criterion kind = Criterion::MDL;
    int first_q = 0;              ///< q of values[0]: 0 for MDL, 1 for MDL-gap
    std::vector<double> values;
    int estimate = 0;             ///< argmin over q (lowest q on ties)
    double effective_snapshots = 0.0;

    double at(int q) const { return values.at(static_cast<std::size_t>(q - first_q)); }
    int last_q() const noexcept { return first_q + static_cast<int>(values.size()) - 1; }
};

namespace detail {

// Sorted magnitudes plus suffix sums needed by both criteria.
struct TailStats {
    std::vector<double> mag;      // descending
    std::vector<double> sum;      // sum[q]  = sum_{j>=q} mag[j] (0-based)
    std::vector<double> logsum;   // logsum[q] = sum_{j>=q} log mag[j]

    explicit TailStats(std::span<const double> eigvals) : mag(eigvals.size()) {
        std::transform(eigvals.begin(), eigvals.end(), mag.begin(), [](double v) { return std::abs(v); });
        std::sort(mag.begin(), mag.end(), std::greater<>());
        if (mag.empty() || mag.front() <= 0.0)
            throw Error(Errc::NonPositiveEigenvalueMagnitudes, "all eigenvalue magnitudes are zero");
        const std::size_t p = mag.size();
        sum.assign(p + 1, 0.0);
        logsum.assign(p + 1, 0.0);
        for (std::size_t j = p; j-- > 0;) {
            sum[j] = sum[j + 1] + mag[j];
            logsum[j] = logsum[j + 1] + std::log(mag[j]);
        }
    }

    // Arithmetic mean of the P-q smallest magnitudes.
    double mean_tail(int q) const { return sum[static_cast<std::size_t>(q)] / static_cast<double>(mag.size() - static_cast<std::size_t>(q)); }
};

inline int argmin(const std::vector<double>& v) {
    return static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace detail

/// MDL(q) = -(P-q) L log(g_q/a_q) + q(2P-q) log(L) / 2, q = 0..P-1, on |lambda|.
inline EnumerationResult mdl(std::span<const double> eigvals, double effective_snapshots) {
    if (!(effective_snapshots >= 1.0)) throw Error(Errc::InvalidArgument, "effective snapshot count must be >= 1");
    const detail::TailStats tail(eigvals);
    const int p = static_cast<int>(tail.mag.size());
    const double log_l = std::log(effective_snapshots);

    EnumerationResult res{Criterion::MDL, 0, std::vector<double>(static_cast<std::size_t>(p)), 0, effective_snapshots};
    for (int q = 0; q < p; ++q) {
        const double n_tail = p - q;
        const double log_g = tail.logsum[static_cast<std::size_t>(q)] / n_tail;
        const double log_a = std::log(tail.mean_tail(q));
        res.values[static_cast<std::size_t>(q)] =
            -n_tail * effective_snapshots * (log_g - log_a) + 0.5 * q * (2.0 * p - q) * log_l;
    }
    res.estimate = detail::argmin(res.values);
    return res;
}

/// MDL-gap(q) = (MDL(q) - MDL(q-1)) / L in closed form, q = 1..P-1.
inline EnumerationResult mdl_gap(std::span<const double> eigvals, double effective_snapshots) {
    if (!(effective_snapshots >= 1.0)) throw Error(Errc::InvalidArgument, "effective snapshot count must be >= 1");
    const detail::TailStats tail(eigvals);
    const int p = static_cast<int>(tail.mag.size());
    if (p < 2) throw Error(Errc::DimensionMismatch, "MDL-gap needs at least two eigenvalues");
    const double log_l = std::log(effective_snapshots);

    EnumerationResult res{Criterion::MDLGap, 1, std::vector<double>(static_cast<std::size_t>(p - 1)), 1,
                          effective_snapshots};
    for (int q = 1; q < p; ++q) {
        const double log_ratio = (p - q + 1) * std::log(tail.mean_tail(q - 1)) -
                                 std::log(tail.mag[static_cast<std::size_t>(q - 1)]) -
                                 (p - q) * std::log(tail.mean_tail(q));
        res.values[static_cast<std::size_t>(q - 1)] = -log_ratio + (p - q + 0.5) / effective_snapshots * log_l;
    }
    res.estimate = detail::argmin(res.values) + 1;
    return res;
}

inline EnumerationResult enumerate(Criterion kind, std::span<const double> eigvals, double effective_snapshots) {
    return kind == Criterion::MDL ? mdl(eigvals, effective_snapshots) : mdl_gap(eigvals, effective_snapshots);
}

/// MUSIC pseudo-spectrum plus bookkeeping.
struct MusicSpectrum {
    SpatialSpectrum spectrum;
    double focus_freq = 0.0;
    int assumed_sources = 0;
    int clamped_points = 0;  ///< grid points whose denominator hit the round-off floor
};

/// P(u) = 1 / (a(u)^H Vn Vn^H a(u)) with Vn the P-D smallest-|lambda|
/// eigenvectors and a(u)_p = exp(j phi p u), p = 0..P-1, phi = 2 pi f d / c.
inline MusicSpectrum music_spectrum(const EigenSystem& es, int num_sources, const UGrid& grid,
                                    const ArrayGeometry& geom, double focus_hz) {
    const int p = es.size();
    if (num_sources < 1 || num_sources >= p)
        throw Error(Errc::InvalidArgument, "assumed source count must lie in [1, P-1]");

    const auto noise = es.eigvecs.rightCols(p - num_sources);
    const CMatrix proj = noise * noise.adjoint();

    // a^H Pi a = s(0) + 2 Re sum_{l>0} s(l) e^{j phi l u}, s(l) = sum_{j-i=l} Pi_ij
    std::vector<cdouble> diag_sum(static_cast<std::size_t>(p), 0.0);
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) diag_sum[static_cast<std::size_t>(j - i)] += proj(i, j);

    const double phase = geom.lag_phase(focus_hz);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, diag_sum[0].real()) * p;
    MusicSpectrum out{SpatialSpectrum(grid), focus_hz, num_sources, 0};
    for (int g = 0; g < grid.size(); ++g) {
        const cdouble base = phasor(phase * grid[g]);
        cdouble e = base;
        double den = 0.0;
        for (int l = 1; l < p; ++l) {
            den += (diag_sum[static_cast<std::size_t>(l)] * e).real();
            e *= base;
        }
        den = diag_sum[0].real() + 2.0 * den;
        if (!(den > floor)) {
            den = floor;
            ++out.clamped_points;
        }
        out.spectrum.values[static_cast<std::size_t>(g)] = 1.0 / den;
    }
    return out;
}

inline MusicSpectrum music_spectrum(const AugmentedCovariance& acm, int num_sources, const UGrid& grid,
                                    const ArrayGeometry& geom) {
    return music_spectrum(eig_sorted(acm), num_sources, grid, geom, acm.focus_freq);
}

/// Up to `count` strict local maxima, tallest first (lower u on ties), each
/// refined by a 3-point parabola through the reciprocal values.
inline std::vector<double> pick_peaks(const SpatialSpectrum& s, int count) {
    if (count < 1) throw Error(Errc::InvalidArgument, "peak count must be at least 1");
    const auto& v = s.values;
    std::vector<int> maxima;
    for (int i = 1; i + 1 < static_cast<int>(v.size()); ++i)
        if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(i - 1)] &&
            v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(i + 1)])
            maxima.push_back(i);
    std::stable_sort(maxima.begin(), maxima.end(),
                     [&](int a, int b) { return v[static_cast<std::size_t>(a)] > v[static_cast<std::size_t>(b)]; });
    if (static_cast<int>(maxima.size()) > count) maxima.resize(static_cast<std::size_t>(count));

    std::vector<double> out;
    out.reserve(maxima.size());
    const double h = s.grid.step();
    for (int i : maxima) {
        const double vl = v[static_cast<std::size_t>(i - 1)];
        const double vc = v[static_cast<std::size_t>(i)];
        const double vr = v[static_cast<std::size_t>(i + 1)];
        double delta = 0.0;
        if (vl > 0.0 && vr > 0.0) {
            // Reciprocal of a MUSIC peak is locally quadratic, so fit its minimum.
            const double yl = 1.0 / vl, yc = 1.0 / vc, yr = 1.0 / vr;
            const double curv = yl - 2.0 * yc + yr;
            if (curv > 0.0) delta = 0.5 * (yl - yr) / curv;
        } else {
            const double curv = vl - 2.0 * vc + vr;
            if (curv < 0.0) delta = 0.5 * (vl - vr) / curv;
        }
        delta = std::clamp(delta, -0.5, 0.5);
        out.push_back(s.grid[i] + delta * h);
    }
    return out;
}

}  // namespace sparsefocus
