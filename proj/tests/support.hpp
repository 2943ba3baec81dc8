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
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <sparsefocus/sparsefocus.hpp>

namespace sftest {

using namespace sparsefocus;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline cdouble cnormal(std::mt19937_64& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(g);
    const double im = n(g);
    return {re, im};
}

inline CMatrix random_matrix(std::mt19937_64& g, int rows, int cols) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cnormal(g);
    return m;
}

inline CMatrix random_hermitian(std::mt19937_64& g, int n) {
    const CMatrix a = random_matrix(g, n, n);
    return 0.5 * (a + a.adjoint());
}

/// Random conjugate-symmetric correlation vector with real r(0).
inline CorrelationVector random_correlation(std::mt19937_64& g, int p, double freq = 100.0) {
    CorrelationVector r(p, freq);
    for (int k = 0; k < p; ++k) r.at(k) = cnormal(g);
    r.mirror_from_right();
    return r;
}

inline double rel_err(const CMatrix& a, const CMatrix& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

inline double rel_err(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

inline double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

// Brute-force difference coarray: counts over all N^2 ordered pairs.
struct BruteCoarray {
    std::vector<int> weight;  // indexed by lag + max_lag
    int max_lag = 0;
    int P = 0;

    explicit BruteCoarray(const std::vector<int>& idx) {
        max_lag = idx.back() - idx.front();
        weight.assign(static_cast<std::size_t>(2 * max_lag + 1), 0);
        for (int a : idx)
            for (int b : idx) ++weight[static_cast<std::size_t>(a - b + max_lag)];
        while (P <= max_lag && weight[static_cast<std::size_t>(P + max_lag)] > 0) ++P;
    }
    int at(int lag) const { return weight[static_cast<std::size_t>(lag + max_lag)]; }
};

/// Coarray correlation of a single planewave on the manifold at `freq`, from
/// the physical definition 2 pi f d k u / c rather than the library helpers.
inline CorrelationVector planewave_correlation(const ArrayGeometry& geom, int p, double freq, double u, double power,
                                               double noise) {
    CorrelationVector r(p, freq);
    const double step = 2.0 * pi * freq * geom.spacing() / geom.speed() * u;
    for (int k = -(p - 1); k < p; ++k) r.at(k) = power * std::polar(1.0, step * k) + (k == 0 ? noise : 0.0);
    return r;
}

}  // namespace sftest
