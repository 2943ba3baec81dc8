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

#include "error.hpp"
#include "grid.hpp"

namespace sparsefocus {

/// Largest possible DOA error for a source at u inside the visible region.
inline double worst_case_error(double u) { return std::max(1.0 - u, 1.0 + u); }

/// Pairs estimates with truths minimizing total squared error.
///
/// Returns one estimate per truth in the truths' order. Truths left without an
/// estimate get the visible-region endpoint farthest from them, so they carry
/// the worst-case error. In one dimension an order-preserving matching is
/// optimal, so a small dynamic program over the sorted lists is exact.
inline std::vector<double> match_estimates(std::span<const double> estimates, std::span<const double> truths) {
    const std::size_t d = truths.size();
    const std::size_t k = estimates.size();
    std::vector<std::size_t> t_order(d);
    std::iota(t_order.begin(), t_order.end(), std::size_t{0});
    std::sort(t_order.begin(), t_order.end(), [&](std::size_t a, std::size_t b) { return truths[a] < truths[b]; });
    std::vector<double> est(estimates.begin(), estimates.end());
    std::sort(est.begin(), est.end());

    constexpr double inf = std::numeric_limits<double>::infinity();
    // cost[i][j]: first i sorted truths against first j sorted estimates.
    std::vector<std::vector<double>> cost(d + 1, std::vector<double>(k + 1, inf));
    std::vector<std::vector<char>> move(d + 1, std::vector<char>(k + 1, 0));
    cost[0][0] = 0.0;
    for (std::size_t i = 0; i <= d; ++i)
        for (std::size_t j = 0; j <= k; ++j) {
            if (i == 0 && j == 0) continue;
            if (i > 0 && j > 0) {
                const double e = truths[t_order[i - 1]] - est[j - 1];
                const double c = cost[i - 1][j - 1] + e * e;
                if (c < cost[i][j]) { cost[i][j] = c; move[i][j] = 'm'; }
            }
            if (i > 0) {
                const double w = worst_case_error(truths[t_order[i - 1]]);
                const double c = cost[i - 1][j] + w * w;
                if (c < cost[i][j]) { cost[i][j] = c; move[i][j] = 't'; }
            }
            if (j > 0 && cost[i][j - 1] < cost[i][j]) { cost[i][j] = cost[i][j - 1]; move[i][j] = 'e'; }
        }

    std::vector<double> out(d);
    std::size_t i = d, j = k;
    while (i > 0 || j > 0) {
        const char mv = move[i][j];
        if (mv == 'm') {
            out[t_order[i - 1]] = est[j - 1];
            --i; --j;
        } else if (mv == 't') {
            const double u = truths[t_order[i - 1]];
            out[t_order[i - 1]] = u >= 0.0 ? -1.0 : 1.0;
            --i;
        } else {
            --j;
        }
    }
    return out;
}

/// sqrt(sum_d sum_j (u_hat_d(j) - u_d)^2 / (D J)) over matched estimates.
inline double rmse(std::span<const std::vector<double>> matched, std::span<const double> truths) {
    if (matched.empty() || truths.empty()) throw Error(Errc::CountMismatch, "need at least one trial and one truth");
    double acc = 0.0;
    for (const auto& trial : matched) {
        if (trial.size() != truths.size()) throw Error(Errc::CountMismatch, "estimate count differs from truth count");
        for (std::size_t d = 0; d < truths.size(); ++d) {
            const double e = trial[d] - truths[d];
            acc += e * e;
        }
    }
    return std::sqrt(acc / static_cast<double>(truths.size() * matched.size()));
}

/// Resolution test: the spectrum dips at the midpoint below the mean of its
/// values at the two sources.
inline bool resolved(const SpatialSpectrum& s, double u1, double u2) {
    if (!(u1 < u2)) throw Error(Errc::InvalidArgument, "resolution test needs u1 < u2");
    return s.at(0.5 * (u1 + u2)) < 0.5 * (s.at(u1) + s.at(u2));
}

/// Grid locations of strict local maxima that stand at least `min_prominence_db`
/// above their base, in ascending u. The base is the higher of the two lowest
/// points met walking left and right until the spectrum rises above the peak
/// (or the grid ends), as in topographic prominence.
inline std::vector<double> discernible_peaks(const SpatialSpectrum& s, double min_prominence_db = 3.0) {
    const auto& v = s.values;
    const double ratio = std::pow(10.0, min_prominence_db / 10.0);
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] > v[i + 1])) continue;
        double left = v[i];
        for (std::size_t j = i; j-- > 0 && v[j] <= v[i];) left = std::min(left, v[j]);
        double right = v[i];
        for (std::size_t j = i + 1; j < v.size() && v[j] <= v[i]; ++j) right = std::min(right, v[j]);
        const double base = std::max(left, right);
        if (base <= 0.0 || v[i] >= ratio * base) out.push_back(s.grid[i]);
    }
    return out;
}

}  // namespace sparsefocus
