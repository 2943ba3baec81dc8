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
#include <numeric>
#include <span>
#include <vector>

#include "correlation.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "synthesis.hpp"
#include "types.hpp"

// Spatial correlation resampling: per-band coarray correlations are moved onto
// the coarray manifold of a common focus frequency by rational-rate
// interpolation in the lag domain, then averaged over bands.

namespace sparsefocus {

/// up/down with up/down == f_m/f_0, gcd(up, down) == 1.
struct ResampleRatio {
    std::int64_t up = 1;
    std::int64_t down = 1;

    bool is_identity() const noexcept { return up == 1 && down == 1; }
    friend bool operator==(const ResampleRatio&, const ResampleRatio&) = default;
};

struct ResampleFilterSpec {
    int taps_per_factor = 8;       ///< taps = taps_per_factor * max(up, down) + 1
    double stopband_db = 60.0;     ///< Kaiser window attenuation target
    std::int64_t max_denominator = 10000;
};

/// Reduces f_m/f_0 to lowest terms via continued fractions.
/// Throws IrrationalRatio if no fraction with denominator <= max_denominator
/// matches to 1e-9 relative.
inline ResampleRatio rationalize(double f_m, double f_0, std::int64_t max_denominator = 10000) {
    if (!(f_m > 0.0) || !(f_0 > 0.0)) throw Error(Errc::InvalidArgument, "frequencies must be positive");
    const double x = f_m / f_0;
    const double tol = 1e-9 * x;

    // Convergents p_n/q_n of the continued fraction of x.
    std::int64_t p_prev = 1, q_prev = 0;
    std::int64_t p = static_cast<std::int64_t>(std::floor(x)), q = 1;
    double rem = x - std::floor(x);
    while (std::abs(x - static_cast<double>(p) / static_cast<double>(q)) > tol) {
        if (rem <= 0.0) break;
        const double inv = 1.0 / rem;
        const auto a = static_cast<std::int64_t>(std::floor(inv));
        rem = inv - std::floor(inv);
        const std::int64_t p_next = a * p + p_prev;
        const std::int64_t q_next = a * q + q_prev;
        if (q_next > max_denominator) break;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    if (std::abs(x - static_cast<double>(p) / static_cast<double>(q)) > tol || p < 1)
        throw Error(Errc::IrrationalRatio, "no ratio with denominator <= " + std::to_string(max_denominator) +
                                               " for " + std::to_string(f_m) + "/" + std::to_string(f_0));
    const std::int64_t g = std::gcd(p, q);
    return {p / g, q / g};
}

/// Linear-phase Kaiser-windowed sinc lowpass for an up/down resampler.
/// Cutoff min(pi/up, pi/down), passband gain `up`, odd length.
inline std::vector<double> design_resampling_filter(const ResampleRatio& ratio, const ResampleFilterSpec& spec = {}) {
    if (spec.taps_per_factor < 1) throw Error(Errc::InvalidArgument, "taps_per_factor must be positive");
    const std::int64_t factor = std::max(ratio.up, ratio.down);
    std::int64_t taps = spec.taps_per_factor * factor + 1;
    if (taps % 2 == 0) ++taps;

    const double atten = spec.stopband_db;
    double beta = 0.0;
    if (atten > 50.0)
        beta = 0.1102 * (atten - 8.7);
    else if (atten >= 21.0)
        beta = 0.5842 * std::pow(atten - 21.0, 0.4) + 0.07886 * (atten - 21.0);

    const double cutoff = 1.0 / static_cast<double>(factor);  // in units of pi
    const double centre = 0.5 * static_cast<double>(taps - 1);
    const double i0_beta = std::cyl_bessel_i(0.0, beta);
    std::vector<double> h(static_cast<std::size_t>(taps));
    for (std::int64_t n = 0; n < taps; ++n) {
        const double t = static_cast<double>(n) - centre;
        const double arg = pi * cutoff * t;
        const double sinc = t == 0.0 ? 1.0 : std::sin(arg) / arg;
        const double ratio_sq = t / centre;
        const double window = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - ratio_sq * ratio_sq))) / i0_beta;
        h[static_cast<std::size_t>(n)] = static_cast<double>(ratio.up) * cutoff * sinc * window;
    }
    return h;
}

/// Resamples one band's coarray correlation from f_m onto the f_0 = f_m*down/up manifold.
///
/// Zero insertion by `up`, lowpass filtering aligned by the filter group delay,
/// decimation by `down` at lags 0..P-1, then conjugate mirroring. The filter
/// runs over the two-sided lag sequence (negative lags are conjugates of
/// positive ones), with zeros beyond +-(P-1).
inline CorrelationVector resample_correlation_band(const CorrelationVector& r, const ResampleRatio& ratio,
                                                   std::span<const double> filter) {
    const int p = r.P;
    CorrelationVector out(p, r.freq_hz * static_cast<double>(ratio.down) / static_cast<double>(ratio.up), true);
    if (ratio.is_identity()) {
        out.values = r.values;
        return out;
    }
    const std::int64_t up = ratio.up;
    const std::int64_t down = ratio.down;
    if (down * (p - 1) > up * (p - 1))
        throw Error(Errc::InsufficientSupport, "decimated sequence would need lags beyond the coarray");

    const auto taps = static_cast<std::int64_t>(filter.size());
    const std::int64_t delay = (taps - 1) / 2;
    const std::int64_t last = 2 * static_cast<std::int64_t>(p - 1);  // last input sample index
    const std::int64_t origin = static_cast<std::int64_t>(p - 1) * up;

    for (int k = 0; k < p; ++k) {
        const std::int64_t n = origin + down * k + delay;  // position in the unaligned filter output
        std::int64_t s_lo = n - (taps - 1) <= 0 ? 0 : (n - (taps - 1) + up - 1) / up;
        std::int64_t s_hi = std::min(last, n / up);
        cdouble acc = 0.0;
        for (std::int64_t s = s_lo; s <= s_hi; ++s)
            acc += filter[static_cast<std::size_t>(n - s * up)] * r.at(static_cast<int>(s) - (p - 1));
        out.at(k) = acc;
    }
    out.mirror_from_right();
    return out;
}

inline CorrelationVector resample_correlation_band(const CorrelationVector& r, const ResampleRatio& ratio,
                                                   const ResampleFilterSpec& spec = {}) {
    if (ratio.is_identity()) return resample_correlation_band(r, ratio, std::span<const double>{});
    const auto h = design_resampling_filter(ratio, spec);
    return resample_correlation_band(r, ratio, std::span<const double>(h));
}

/// Ratios and filters for every band of a plan, designed once for a focus frequency.
class ResamplingBank {
public:
    ResamplingBank(const BandPlan& plan, double focus_hz, const ResampleFilterSpec& spec = {}) : focus_hz_(focus_hz) {
        for (int m = 0; m < plan.size(); ++m) {
            const auto ratio = rationalize(plan.frequency(m), focus_hz, spec.max_denominator);
            ratios_.push_back(ratio);
            filters_.push_back(ratio.is_identity() ? std::vector<double>{} : design_resampling_filter(ratio, spec));
        }
    }

    double focus_frequency() const noexcept { return focus_hz_; }
    int bands() const noexcept { return static_cast<int>(ratios_.size()); }
    const ResampleRatio& ratio(int m) const { return ratios_.at(static_cast<std::size_t>(m)); }

    /// Mean over bands of the resampled correlations.
    CorrelationVector focus(std::span<const CorrelationVector> band_correlations) const {
        if (static_cast<int>(band_correlations.size()) != bands() || band_correlations.empty())
            throw Error(Errc::DimensionMismatch, "one correlation vector per band is required");
        const int p = band_correlations.front().P;
        CorrelationVector out(p, focus_hz_, true);
        for (std::size_t m = 0; m < ratios_.size(); ++m) {
            const auto& rm = band_correlations[m];
            if (rm.P != p) throw Error(Errc::DimensionMismatch, "bands disagree on coarray span");
            const auto focused = resample_correlation_band(rm, ratios_[m], std::span<const double>(filters_[m]));
            for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += focused.values[i];
        }
        for (auto& v : out.values) v /= static_cast<double>(ratios_.size());
        out.mirror_from_right();
        return out;
    }

private:
    double focus_hz_;
    std::vector<ResampleRatio> ratios_;
    std::vector<std::vector<double>> filters_;
};

/// Averages band correlations after resampling each onto the focus frequency.
inline CorrelationVector scr_focus(std::span<const CorrelationVector> band_correlations, const BandPlan& plan,
                                   double focus_hz, const ResampleFilterSpec& spec = {}) {
    if (static_cast<int>(band_correlations.size()) != plan.size())
        throw Error(Errc::DimensionMismatch, "one correlation vector per band is required");
    return ResamplingBank(plan, focus_hz, spec).focus(band_correlations);
}

inline CorrelationVector scr_correlations(const FrequencySnapshots& snapshots, const Coarray& coarray,
                                          double focus_hz, const ResampleFilterSpec& spec = {}) {
    std::vector<CorrelationVector> bands;
    const auto& plan = snapshots.band_plan();
    for (int m = 0; m < snapshots.bands(); ++m)
        bands.push_back(coarray_correlation(sample_covariance(snapshots, m), coarray, plan.frequency(m)));
    return scr_focus(bands, plan, focus_hz, spec);
}

}  // namespace sparsefocus
