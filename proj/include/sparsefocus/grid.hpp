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

namespace sparsefocus {

/// Uniform grid over the visible region [-1, 1], endpoints included and
/// exactly symmetric about zero.
class UGrid {
public:
    explicit UGrid(int count) : points_(static_cast<std::size_t>(count)) {
        if (count < 2) throw Error(Errc::InvalidArgument, "grid needs at least two points");
        const double h = 2.0 / (count - 1);
        for (int i = 0; i < count; ++i) points_[static_cast<std::size_t>(i)] = -1.0 + h * i;
        for (int i = 0; i < count / 2; ++i)
            points_[static_cast<std::size_t>(count - 1 - i)] = -points_[static_cast<std::size_t>(i)];
        if (count % 2 == 1) points_[static_cast<std::size_t>(count / 2)] = 0.0;
    }

    /// Grid with the given step; 2/step must be (close to) an integer.
    static UGrid with_step(double step) {
        if (!(step > 0.0) || step > 2.0) throw Error(Errc::InvalidArgument, "grid step must be in (0, 2]");
        return UGrid(static_cast<int>(std::lround(2.0 / step)) + 1);
    }

    int size() const noexcept { return static_cast<int>(points_.size()); }
    double step() const noexcept { return 2.0 / (size() - 1); }
    double operator[](int i) const { return points_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& points() const noexcept { return points_; }

    friend bool operator==(const UGrid&, const UGrid&) = default;

private:
    std::vector<double> points_;
};

/// Real spectrum sampled on a UGrid.
struct SpatialSpectrum {
    UGrid grid;
    std::vector<double> values;

    explicit SpatialSpectrum(UGrid g) : grid(std::move(g)), values(static_cast<std::size_t>(grid.size()), 0.0) {}

    /// Linear interpolation at u (clamped to the grid).
    double at(double u) const {
        const double h = grid.step();
        double pos = (u + 1.0) / h;
        if (pos <= 0.0) return values.front();
        if (pos >= grid.size() - 1) return values.back();
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return values[i] * (1.0 - frac) + values[i + 1] * frac;
    }
};

}  // namespace sparsefocus
