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

#include <iomanip>
#include <optional>
#include <ostream>
#include <string>

#include "correlation.hpp"
#include "error.hpp"
#include "types.hpp"

namespace sparsefocus {

enum class AcmKind { LRA, SS };

/// P x P augmented covariance with where it came from.
struct AugmentedCovariance {
    CMatrix matrix;
    AcmKind kind = AcmKind::LRA;
    double focus_freq = 0.0;
    std::string provenance;

    int size() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// Hermitian Toeplitz ACM with entry (i,j) = r(i-j). May be indefinite.
inline AugmentedCovariance lra_acm(const CorrelationVector& r, std::optional<int> size = std::nullopt,
                                   std::string provenance = {}) {
    const int p = size.value_or(r.P);
    if (p < 1 || p > r.P || static_cast<int>(r.values.size()) != 2 * r.P - 1)
        throw Error(Errc::MissingLags, "correlation does not cover lags +-" + std::to_string(p - 1));
    AugmentedCovariance acm{CMatrix(p, p), AcmKind::LRA, r.freq_hz, std::move(provenance)};
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) acm.matrix(i, j) = r.at(i - j);
    return acm;
}

/// R_SS = R_LRA^2 / P.
inline AugmentedCovariance ss_acm_from_lra(const AugmentedCovariance& lra) {
    if (lra.kind != AcmKind::LRA) throw Error(Errc::InvalidArgument, "expected an LRA matrix");
    const double p = static_cast<double>(lra.size());
    AugmentedCovariance ss{(lra.matrix * lra.matrix) / p, AcmKind::SS, lra.focus_freq, lra.provenance};
    return ss;
}

/// Row-major dump, one matrix row per line as "re,im" pairs.
inline void write_matrix_csv(std::ostream& os, const CMatrix& m) {
    const auto old = os.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << m(i, j).real() << ',' << m(i, j).imag();
        }
        os << '\n';
    }
    os.precision(old);
}

}  // namespace sparsefocus
