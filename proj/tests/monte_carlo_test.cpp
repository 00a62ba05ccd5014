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

#include "telesim/monte_carlo.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "telesim/experiments.hpp"
#include "telesim/rng.hpp"

using namespace telesim;

namespace {

Circuit noisy_teleport(double v) {
    TeleportConfig cfg;
    cfg.setting = InputSetting::kPlus45;
    cfg.source.overlap_v = v;
    cfg.detectors.efficiency = {{"p", 0.7}, {"f1", 0.6}, {"d2", 0.5}};
    cfg.detectors.dark_click_prob = {{"f2", 0.01}, {"d1", 0.02}};
    return build_teleport_circuit(cfg);
}

Circuit noisy_swap(double theta) {
    SwapConfig cfg;
    cfg.source.overlap_v = 0.8;
    cfg.detectors.efficiency = {{"D4", 0.6}};
    cfg.detectors.dark_click_prob = {{"D3plus", 0.01}};
    return build_swap_circuit(cfg, theta);
}

void expect_agreement(const Circuit& c, std::uint64_t trials, bool conditional) {
    const auto table = run_monte_carlo(c, trials, 99, conditional);
    const auto exact = exact_pattern_probabilities(c, conditional);
    const double n = static_cast<double>(trials);
    std::uint64_t seen = 0;
    for (const auto& [name, p] : exact) {
        const double sigma = std::sqrt(p * (1 - p) / n);
        const double freq = table.count(name) / n;
        EXPECT_LE(std::abs(freq - p), 5 * sigma + 1.0 / n) << name << " p=" << p;
        seen += table.count(name);
    }
    EXPECT_EQ(seen, trials);
}

}  // namespace

TEST(SplitMix, StreamsAreReproducibleAndDistinct) {
    SplitMix64 a(5, 3);
    SplitMix64 b(5, 3);
    SplitMix64 c(5, 4);
    for (int i = 0; i < 10; ++i) {
        const double x = a.uniform();
        EXPECT_EQ(x, b.uniform());
        EXPECT_NE(x, c.uniform());
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
}

TEST(PatternName, ListsClickedDetectorsInOrder) {
    const auto c = noisy_teleport(1.0);
    EXPECT_EQ(pattern_name(0, c.detectors), "none");
    EXPECT_EQ(pattern_name(0b00111, c.detectors), "p+f1+f2");
    EXPECT_EQ(pattern_name(0b10001, c.detectors), "p+d2");
}

TEST(MonteCarlo, SameSeedSameTable) {
    const auto c = noisy_teleport(0.75);
    const auto a = run_monte_carlo(c, 20000, 7, true);
    const auto b = run_monte_carlo(c, 20000, 7, true);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_NE(a.counts, run_monte_carlo(c, 20000, 8, true).counts);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeTheTable) {
    const auto c = noisy_swap(0.4);
    const auto one = run_monte_carlo(c, 30001, 3, true, 1);
    const auto four = run_monte_carlo(c, 30001, 3, true, 4);
    EXPECT_EQ(one.counts, four.counts);
}

TEST(MonteCarlo, ZeroTrialsGiveAnEmptyTable) {
    const auto t = run_monte_carlo(noisy_teleport(1.0), 0, 1, true);
    EXPECT_EQ(t.trials, 0u);
    EXPECT_TRUE(t.counts.empty());
    EXPECT_GT(t.restriction_factor, 0.0);
    EXPECT_LT(t.restriction_factor, 1.0);
}

TEST(MonteCarlo, RestrictionFactorIsTheMultiPairMass) {
    const auto c = noisy_teleport(1.0);
    double all = 0.0;
    double multi = 0.0;
    for (const auto& b : spdc_pulse_sectors(c.source)) {
        all += b.state.weight();
        if (pair_count(b.sector) >= 2) multi += b.state.weight();
    }
    EXPECT_NEAR(run_monte_carlo(c, 10, 1, true).restriction_factor, multi / all, 1e-15);
    EXPECT_EQ(run_monte_carlo(c, 10, 1, false).restriction_factor, 1.0);
}

TEST(MonteCarlo, CountWithIgnoresOtherDetectors) {
    CountTable t;
    t.counts = {{"p+f1+f2", 3}, {"p+f1+f2+d1", 5}, {"f1+f2", 7}, {"none", 11}};
    const std::vector<std::string> three{"p", "f1", "f2"};
    EXPECT_EQ(t.count_with(three), 8u);
    const std::vector<std::string> none;
    EXPECT_EQ(t.count_with(none), 26u);
    const std::vector<std::string> d1{"d1"};
    EXPECT_EQ(t.count_with(three, d1), 3u);
}

TEST(MonteCarlo, TeleportCountsAgreeWithExactProbabilities) {
    expect_agreement(noisy_teleport(0.75), 200000, true);
    expect_agreement(noisy_teleport(1.0), 200000, false);
}

TEST(MonteCarlo, SwapCountsAgreeWithExactProbabilities) {
    expect_agreement(noisy_swap(0.0), 200000, true);
    expect_agreement(noisy_swap(1.1), 200000, true);
}

TEST(MonteCarlo, ExactPatternsSumToOne) {
    for (bool conditional : {false, true}) {
        double total = 0.0;
        for (const auto& [name, p] : exact_pattern_probabilities(noisy_teleport(0.5), conditional)) {
            EXPECT_GE(p, 0.0);
            total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}
