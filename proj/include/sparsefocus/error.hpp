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

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsefocus {

enum class Errc {
    InvalidArgument,
    DimensionMismatch,
    NonContiguousAtOrigin,
    GridMismatch,
    IrrationalRatio,
    InsufficientSupport,
    MissingLags,
    ConvergenceFailure,
    NonPositiveEigenvalueMagnitudes,
    DegenerateSubspace,
    CountMismatch,
    ConfigError,
    UnknownPreset,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonContiguousAtOrigin: return "NonContiguousAtOrigin";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::IrrationalRatio: return "IrrationalRatio";
    case Errc::InsufficientSupport: return "InsufficientSupport";
    case Errc::MissingLags: return "MissingLags";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::NonPositiveEigenvalueMagnitudes: return "NonPositiveEigenvalueMagnitudes";
    case Errc::DegenerateSubspace: return "DegenerateSubspace";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::ConfigError: return "ConfigError";
    case Errc::UnknownPreset: return "UnknownPreset";
    }
    return "Unknown";
}

/// Single exception type for the library; the code says which contract broke.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

    /// Configuration problems versus failures inside the numerics.
    bool is_config() const noexcept {
        return code_ == Errc::ConfigError || code_ == Errc::UnknownPreset;
    }
    bool is_numerical() const noexcept {
        return code_ == Errc::ConvergenceFailure ||
               code_ == Errc::NonPositiveEigenvalueMagnitudes ||
               code_ == Errc::DegenerateSubspace;
    }

private:
    Errc code_;
};

}  // namespace sparsefocus
