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

#include <gtest/gtest.h>

#include <numeric>

#include "support.hpp"

using namespace sparsefocus;

TEST(Rationalize, Examples) {
    EXPECT_EQ(rationalize(120.0, 80.0), (ResampleRatio{3, 2}));
    EXPECT_EQ(rationalize(80.0, 80.0), (ResampleRatio{1, 1}));
    EXPECT_EQ(rationalize(81.0, 80.0), (ResampleRatio{81, 80}));
    EXPECT_EQ(rationalize(100.5, 80.0), (ResampleRatio{201, 160}));
    EXPECT_EQ(rationalize(99.0, 80.0), (ResampleRatio{99, 80}));
    for (int m = 0; m < 41; ++m) {
        const auto r = rationalize(80.0 + m, 80.0);
        EXPECT_EQ(std::gcd(r.up, r.down), 1);
        EXPECT_NEAR(static_cast<double>(r.up) / static_cast<double>(r.down), (80.0 + m) / 80.0, 1e-12);
    }
}

TEST(Rationalize, IncommensurableFrequencies) {
    try {
        rationalize(80.0 * std::sqrt(2.0), 80.0, 100);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::IrrationalRatio);
    }
    EXPECT_THROW(rationalize(0.0, 80.0), Error);
}

TEST(ResamplingFilter, ShapeAndGain) {
    for (const ResampleRatio ratio : {ResampleRatio{3, 2}, ResampleRatio{81, 80}, ResampleRatio{5, 4}}) {
        const auto h = design_resampling_filter(ratio);
        const auto factor = std::max(ratio.up, ratio.down);
        EXPECT_EQ(static_cast<std::int64_t>(h.size()), 8 * factor + 1);
        EXPECT_EQ(h.size() % 2, 1u);
        for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(h[i], h[h.size() - 1 - i], 1e-15);
        // DC gain equals the interpolation factor
        double dc = 0.0;
        for (double v : h) dc += v;
        EXPECT_NEAR(dc / static_cast<double>(ratio.up), 1.0, 1e-2);
    }
    ResampleFilterSpec spec;
    spec.taps_per_factor = 3;
    EXPECT_EQ(design_resampling_filter({2, 1}, spec).size() % 2, 1u);
}

TEST(ResampleBand, IdentityIsExact) {
    auto rng = sftest::rng(41);
    const auto r = sftest::random_correlation(rng, 14, 80.0);
    const auto out = resample_correlation_band(r, ResampleRatio{1, 1});
    EXPECT_EQ(out.values, r.values);
    EXPECT_TRUE(out.focused);
}

TEST(ResampleBand, Linear) {
    auto rng = sftest::rng(42);
    const ResampleRatio ratio{7, 5};
    const auto a = sftest::random_correlation(rng, 14, 112.0);
    const auto b = sftest::random_correlation(rng, 14, 112.0);
    CorrelationVector sum(14, 112.0);
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] = 2.0 * a.values[i] - 0.5 * b.values[i];
    const auto ra = resample_correlation_band(a, ratio);
    const auto rb = resample_correlation_band(b, ratio);
    const auto rs = resample_correlation_band(sum, ratio);
    std::vector<cdouble> expect(ra.values.size());
    for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = 2.0 * ra.values[i] - 0.5 * rb.values[i];
    EXPECT_LT(sftest::rel_err(rs.values, expect), 1e-12);
}

TEST(ResampleBand, PlanewaveMovesToFocusManifold) {
    const auto g = make_mra6();
    for (double u : {0.0, 0.3, -0.3}) {
        const auto r = sftest::planewave_correlation(g, 14, 120.0, u, 1.0, 0.0);
        const auto out = resample_correlation_band(r, rationalize(120.0, 80.0));
        const auto ref = sftest::planewave_correlation(g, 14, 80.0, u, 1.0, 0.0);
        EXPECT_LT(sftest::rel_err(out.values, ref.values), 1e-2) << u;
        EXPECT_DOUBLE_EQ(out.freq_hz, 80.0);
    }
}

TEST(ResampleBand, InteriorLagsNearUnitRatio) {
    // With ratios close to one the outermost lags see a truncated kernel; the
    // interior stays within filter ripple.
    const auto g = make_mra6();
    for (double f : {81.0, 90.0, 101.0, 119.0}) {
        const auto r = sftest::planewave_correlation(g, 14, f, 0.3, 1.0, 0.0);
        const auto out = resample_correlation_band(r, rationalize(f, 80.0));
        const auto ref = sftest::planewave_correlation(g, 14, 80.0, 0.3, 1.0, 0.0);
        for (int k = -10; k <= 10; ++k) EXPECT_LT(std::abs(out.at(k) - ref.at(k)), 1e-2 * 1.5) << f << " lag " << k;
    }
}

TEST(ResampleBand, NoiseImpulse) {
    CorrelationVector r(14, 100.0);
    r.at(0) = 2.0;
    const auto out = resample_correlation_band(r, rationalize(100.0, 80.0));
    EXPECT_NEAR(out.at(0).real(), 2.0, 2e-2);
    for (int k = 0; k < 14; ++k) EXPECT_EQ(out.at(-k), std::conj(out.at(k)));
}

TEST(ResampleBand, WhiteNoiseBecomesSampledSinc) {
    // A lag impulse is interpolated, not preserved: r0(k) = s2 sinc(pi k down/up)
    // tapered by the window, so it never exceeds the bare sinc envelope.
    const double s2 = 0.5;
    for (double f : {90.0, 101.0, 119.0}) {
        CorrelationVector r(14, f);
        r.at(0) = s2;
        const auto ratio = rationalize(f, 80.0);
        const auto out = resample_correlation_band(r, ratio);
        EXPECT_NEAR(out.at(0).real(), s2, 1e-3) << f;
        for (int k = 1; k <= 10; ++k) {
            const double x = pi * k * static_cast<double>(ratio.down) / static_cast<double>(ratio.up);
            const double sinc = std::sin(x) / x;
            EXPECT_LE(std::abs(out.at(k)), s2 * std::abs(sinc) + 1e-3) << f << " lag " << k;
            EXPECT_NEAR(out.at(k).imag(), 0.0, 1e-12);
        }
        const double x1 = pi * static_cast<double>(ratio.down) / static_cast<double>(ratio.up);
        EXPECT_GT(out.at(1).real() * std::sin(x1), 0.0) << f;
        EXPECT_GT(std::abs(out.at(1)), 0.5 * s2 * std::abs(std::sin(x1) / x1)) << f;
    }
}

TEST(ResampleBand, RejectsDownsamplingPastSupport) {
    CorrelationVector r(14, 80.0);
    try {
        resample_correlation_band(r, ResampleRatio{2, 3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InsufficientSupport);
    }
}

TEST(Scr, SingleBandIsPassThrough) {
    const auto g = make_mra6();
    const auto co = difference_coarray(g);
    const auto x = generate_snapshots(g, std::vector<SourceSpec>{{0.4, 1.0}}, BandPlan::single(80.0), 10, 1.0,
                                      std::uint64_t{43});
    const auto r = scr_correlations(x, co, 80.0);
    const auto ref = coarray_correlation(sample_covariance(x, 0), co, 80.0);
    EXPECT_LT(sftest::rel_err(r.values, ref.values), 1e-15);
}

TEST(Scr, BankMatchesOneShotFocus) {
    const auto g = make_mra6();
    const auto co = difference_coarray(g);
    const BandPlan plan(80.0, 120.0, 11);
    const auto x = generate_snapshots(g, std::vector<SourceSpec>{{-0.2, 1.0}}, plan, 6, 1.0, std::uint64_t{44});
    const auto bands = band_correlations(x, co);
    const ResamplingBank bank(plan, 80.0);
    EXPECT_EQ(bank.bands(), 11);
    EXPECT_EQ(bank.ratio(10), (ResampleRatio{3, 2}));
    EXPECT_EQ(bank.focus(bands).values, scr_focus(bands, plan, 80.0).values);
    EXPECT_EQ(scr_correlations(x, co, 80.0).values, scr_focus(bands, plan, 80.0).values);
}

TEST(Scr, EnsembleSourceMatchesFocusManifold) {
    const auto g = make_mra6();
    const auto co = difference_coarray(g);
    const BandPlan plan(80.0, 120.0, 41);
    for (double u : {0.0, 0.3}) {
        const std::vector<SourceSpec> src{{u, 1.0}};
        std::vector<CorrelationVector> bands;
        for (double f : plan.frequencies()) bands.push_back(coarray_correlation(ensemble_covariance(g, src, f, 0.0), co, f));
        const auto r = scr_focus(bands, plan, 80.0);
        const auto ref = sftest::planewave_correlation(g, 14, 80.0, u, 1.0, 0.0);
        EXPECT_LT(sftest::rel_err(r.values, ref.values), 1e-2) << u;
    }
}
