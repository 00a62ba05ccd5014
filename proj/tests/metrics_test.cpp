// Copyright 2026 The Telesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "telesim/metrics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

using namespace telesim;

namespace {

const double kPi = std::numbers::pi;

std::vector<std::pair<double, double>> fringe(double offset, double vis, double phase, int steps = 16) {
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < steps; ++k) {
        const double th = kPi * k / steps;
        pts.emplace_back(th, offset * (1 + vis * std::cos(2 * (th - phase))));
    }
    return pts;
}

}  // namespace

TEST(FitFringe, FullMalusFringe) {
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 8; ++k) {
        const double th = kPi * k / 8;
        pts.emplace_back(th, std::pow(std::cos(th - kPi / 4), 2));
    }
    const auto f = fit_fringe(pts);
    EXPECT_NEAR(f.visibility, 1.0, 1e-12);
    EXPECT_NEAR(f.phase, kPi / 4, 1e-12);
    EXPECT_NEAR(f.offset, 0.5, 1e-12);
    EXPECT_LT(f.residual, 1e-12);
    EXPECT_TRUE(f.phase_defined);
}

TEST(FitFringe, RoundTripsRandomParameters) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double offset = 0.1 + 10 * u(rng);
        const double vis = u(rng);
        const double phase = kPi * u(rng);
        const auto f = fit_fringe(fringe(offset, vis, phase));
        EXPECT_NEAR(f.visibility, vis, 1e-10);
        EXPECT_NEAR(f.offset, offset, 1e-10 * offset);
        if (vis > 1e-3) {
            const double d = std::remainder(f.phase - phase, kPi);
            EXPECT_NEAR(d, 0.0, 1e-8);
        }
    }
}

TEST(FitFringe, NoisyPartialFringe) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 0.01);
        auto pts = fringe(1.0, 0.65, 0.3);
        for (auto& p : pts) p.second *= 1.0 + noise(rng);
        EXPECT_NEAR(fit_fringe(pts).visibility, 0.65, 0.02) << seed;
    }
}

TEST(FitFringe, WeightedFitOfCounts) {
    auto pts = fringe(1000.0, 0.5, 1.0, 12);
    const auto w = poisson_weights(pts);
    ASSERT_EQ(w.size(), pts.size());
    EXPECT_NEAR(fit_fringe(pts, w).visibility, 0.5, 1e-10);
    const std::vector<double> short_w{1.0};
    EXPECT_THROW(fit_fringe(pts, short_w), ValidationError);
}

TEST(FitFringe, FlatDataHasNoPhase) {
    const auto f = fit_fringe(fringe(2.0, 0.0, 0.0));
    EXPECT_EQ(f.visibility, 0.0);
    EXPECT_FALSE(f.phase_defined);
    EXPECT_DOUBLE_EQ(f.offset, 2.0);
}

TEST(FitFringe, RejectsTooFewOrTooNarrowPoints) {
    auto pts = fringe(1.0, 0.5, 0.0, 16);
    std::vector<std::pair<double, double>> three(pts.begin(), pts.begin() + 3);
    EXPECT_THROW(fit_fringe(three), ValidationError);
    std::vector<std::pair<double, double>> narrow(pts.begin(), pts.begin() + 6);
    EXPECT_THROW(fit_fringe(narrow), ValidationError);
    std::vector<std::pair<double, double>> negative{{0, -1}, {0.5, -2}, {1, -1.5}, {2, -1}};
    EXPECT_THROW(fit_fringe(negative), ValidationError);
}

TEST(Thresholds, Values) {
    EXPECT_DOUBLE_EQ(kClassicalFidelityBound, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(kClassicalVisibilityBound, 0.5);
    EXPECT_NEAR(kBellVisibilityThreshold, 0.70710678118654752, 1e-15);
}

TEST(Thresholds, FidelityFromVisibility) {
    EXPECT_NEAR(fidelity_from_visibility(0.65), 0.825, 1e-15);
    EXPECT_DOUBLE_EQ(fidelity_from_visibility(0.0), 0.5);
    EXPECT_DOUBLE_EQ(fidelity_from_visibility(1.0), 1.0);
    EXPECT_THROW(fidelity_from_visibility(1.2), ValidationError);
    EXPECT_THROW(fidelity_from_visibility(std::nan("")), ValidationError);
}

// A Werner state with singlet weight p has visibility p, singlet fraction (1 + 3p)/4 and
// average teleportation fidelity (1 + p)/2 = (2 F_s + 1)/3.
TEST(Thresholds, WernerStateConsistency) {
    for (double p : {0.0, 0.3, 0.5, kBellVisibilityThreshold, 1.0}) {
        const double fs = (1 + 3 * p) / 4;
        EXPECT_NEAR(fidelity_from_visibility(p), (2 * fs + 1) / 3, 1e-15);
    }
    // The classical visibility bound maps to fidelity 3/4, above the classical fidelity bound.
    EXPECT_NEAR(fidelity_from_visibility(kClassicalVisibilityBound), 0.75, 1e-15);
    EXPECT_GT(fidelity_from_visibility(kClassicalVisibilityBound), kClassicalFidelityBound);
}

TEST(Assess, StrictComparisonsAndMissingValues) {
    ExperimentReport r;
    r.fidelity = kClassicalFidelityBound;
    r.visibility = kBellVisibilityThreshold;
    auto a = assess(r);
    EXPECT_FALSE(a.beats_classical);
    EXPECT_FALSE(a.bell_violating);
    EXPECT_TRUE(a.beats_classical_visibility);

    r.fidelity = 0.80;
    r.visibility = 0.72;
    a = assess(r);
    EXPECT_TRUE(a.beats_classical);
    EXPECT_TRUE(a.bell_violating);

    a = assess(ExperimentReport{});
    EXPECT_TRUE(std::isnan(a.fidelity));
    EXPECT_FALSE(a.beats_classical);
    EXPECT_FALSE(a.bell_violating);
}

TEST(Crosstalk, Rejection) {
    CrosstalkStats s;
    EXPECT_EQ(crosstalk_rejection(s), 1.0);
    s.spurious_threefold_prob = 1e-8;
    s.spurious_with_bob_click_prob = 1e-11;
    EXPECT_NEAR(crosstalk_rejection(s), 0.999, 1e-12);
}
