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

#include "telesim/optics.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace telesim;

namespace {

const double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

FockBasisState one(const std::string& path, Pol pol, int tbin = 0) {
    return FockBasisState({{ModeLabel{path, pol, tbin}, 1}});
}

// |<expected|out>| for single-photon states on one path; 1 means equal up to a global phase.
double overlap(const StateVector& out, const std::string& path, Complex h, Complex v) {
    return std::abs(std::conj(h) * out.amplitude(one(path, Pol::H)) +
                    std::conj(v) * out.amplitude(one(path, Pol::V)));
}

double photons_kept(const StateVector& s, const std::string& path, int n) {
    double p = 0.0;
    for (const auto& [b, amp] : s.terms()) {
        if (b.photons_on_path(path) == n) p += std::norm(amp);
    }
    return p;
}

}  // namespace

TEST(Elements, AllMapsAreUnitary) {
    EXPECT_TRUE(beamsplitter_map("a", "b").is_unitary(1e-12));
    EXPECT_TRUE(waveplate_map("a", WaveplateKind::kHalf, 0.3).is_unitary(1e-12));
    EXPECT_TRUE(waveplate_map("a", WaveplateKind::kQuarter, 1.1).is_unitary(1e-12));
    EXPECT_TRUE(pbs_map("a", "h", "v").is_unitary(1e-12));
    EXPECT_TRUE(polarizer_map("a", 0.7, "sink").is_unitary(1e-12));
    EXPECT_TRUE(loss_map("a", 0.3, "sink").is_unitary(1e-12));
}

TEST(Beamsplitter, SymmetricConvention) {
    const auto out = apply_mode_map(make_qubit_photon(PolarizationQubit::horizontal(), "a"),
                                    beamsplitter_map("a", "b"));
    EXPECT_NEAR(std::abs(out.amplitude(one("a", Pol::H)) - Complex(kInvSqrt2, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude(one("b", Pol::H)) - Complex(0, kInvSqrt2)), 0.0, 1e-15);
}

TEST(Waveplates, HalfWaveAtEighthTurnMakesDiagonal) {
    const auto out = apply_mode_map(make_qubit_photon(PolarizationQubit::horizontal(), "a"),
                                    waveplate_map("a", WaveplateKind::kHalf, kPi / 8));
    EXPECT_NEAR(overlap(out, "a", kInvSqrt2, kInvSqrt2), 1.0, 1e-12);
}

TEST(Waveplates, QuarterWaveAtQuarterTurnMakesCircular) {
    const auto out = apply_mode_map(make_qubit_photon(PolarizationQubit::horizontal(), "a"),
                                    waveplate_map("a", WaveplateKind::kQuarter, kPi / 4));
    EXPECT_NEAR(overlap(out, "a", kInvSqrt2, Complex(0, kInvSqrt2)), 1.0, 1e-12);
}

TEST(Waveplates, HalfWaveRotatesLinearPolarizationByTwiceItsAngle) {
    for (double a : {0.0, 0.2, 0.5, 1.3}) {
        const auto out = apply_mode_map(make_qubit_photon(PolarizationQubit::horizontal(), "a"),
                                        waveplate_map("a", WaveplateKind::kHalf, a));
        EXPECT_NEAR(overlap(out, "a", std::cos(2 * a), std::sin(2 * a)), 1.0, 1e-12);
    }
}

TEST(Waveplates, TemplatedJonesMatrixInFloat) {
    const auto j = waveplate_jones<float>(WaveplateKind::kHalf, static_cast<float>(kPi / 8));
    EXPECT_NEAR(std::abs(j(1, 0)), kInvSqrt2, 1e-6);
}

TEST(PolarizingBeamsplitter, RoutesAndInverts) {
    const auto pbs = pbs_map("a", "h", "v");
    const auto q = PolarizationQubit(0.6, Complex(0, 0.8));
    const auto out = apply_mode_map(make_qubit_photon(q, "a"), pbs);
    EXPECT_NEAR(std::abs(out.amplitude(one("h", Pol::H)) - 0.6), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude(one("v", Pol::V)) - Complex(0, 0.8)), 0.0, 1e-15);
    EXPECT_NEAR(photons_kept(out, "a", 1), 0.0, 1e-15);

    const auto back = apply_mode_map(out, pbs.adjoint());
    EXPECT_NEAR(std::abs(inner(back, make_qubit_photon(q, "a"))), 1.0, 1e-12);
}

TEST(Polarizer, MalusLaw) {
    for (double photon : {0.0, 0.4, 1.0}) {
        for (double axis : {0.0, 0.3, kPi / 4, 2.0}) {
            const auto out = apply_mode_map(
                make_qubit_photon(PolarizationQubit::linear(photon), "a"),
                polarizer_map("a", axis, "sink"));
            const double c = std::cos(axis - photon);
            EXPECT_NEAR(photons_kept(out, "a", 1), c * c, 1e-12);
            EXPECT_NEAR(photons_kept(out, "sink", 1), 1.0 - c * c, 1e-12);
        }
    }
}

TEST(Polarizer, TransmittedPhotonIsAlongTheAxis) {
    const auto out = apply_mode_map(make_qubit_photon(PolarizationQubit(0.6, 0.8), "a"),
                                    polarizer_map("a", 0.9, "sink"));
    StateVector kept;
    for (const auto& [b, amp] : out.terms()) {
        if (b.photons_on_path("a") == 1) kept.add(b, amp);
    }
    EXPECT_NEAR(overlap(kept.normalized(), "a", std::cos(0.9), std::sin(0.9)), 1.0, 1e-12);
}

TEST(Loss, SurvivalProbability) {
    const auto out = apply_mode_map(make_qubit_photon(PolarizationQubit(0.6, 0.8), "a"),
                                    loss_map("a", 0.25, "sink"));
    EXPECT_NEAR(photons_kept(out, "a", 1), 0.25, 1e-12);

    // Two photons are lost independently.
    StateVector both;
    both.add(FockBasisState({{ModeLabel{"a", Pol::H, 0}, 1}, {ModeLabel{"a", Pol::V, 0}, 1}}), 1.0);
    const auto lossy = apply_mode_map(both, loss_map("a", 0.6, "sink"));
    EXPECT_NEAR(photons_kept(lossy, "a", 2), 0.36, 1e-12);
    EXPECT_NEAR(photons_kept(lossy, "a", 1), 2 * 0.6 * 0.4, 1e-12);
}

TEST(Loss, RejectsEfficiencyOutsideUnitInterval) {
    EXPECT_THROW(loss_map("a", 1.5, "sink"), ValidationError);
    EXPECT_THROW(loss_map("a", -0.1, "sink"), ValidationError);
}

TEST(Source, ValidatesConfiguration) {
    SourceConfig cfg;
    cfg.chi_forward = 0.3;
    EXPECT_THROW(spdc_pulse_sectors(cfg), ValidationError);
    cfg = SourceConfig{};
    cfg.overlap_v = 1.2;
    EXPECT_THROW(spdc_pulse_sectors(cfg), ValidationError);
    cfg = SourceConfig{};
    cfg.return_paths = {"2", "p"};
    EXPECT_THROW(spdc_pulse_sectors(cfg), ValidationError);
}

TEST(Source, PulseIsNormalizedAndTruncatedAtTwoPairs) {
    for (double v : {0.0, 0.5, 1.0}) {
        SourceConfig cfg;
        cfg.chi_forward = 0.1;
        cfg.chi_return = 0.05;
        cfg.overlap_v = v;
        const auto s = spdc_pulse_state(cfg);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
        int max_photons = 0;
        for (const auto& [b, amp] : s.terms()) max_photons = std::max(max_photons, b.total_photons());
        EXPECT_EQ(max_photons, 4);
    }
    EXPECT_EQ(spdc_pulse_sectors(SourceConfig{}).size(), 6u);
}

TEST(Source, ReturnPhotonsFollowTheOverlapParameter) {
    for (double v : {0.0, 1.0}) {
        SourceConfig cfg;
        cfg.overlap_v = v;
        for (const auto& br : spdc_pulse_sectors(cfg)) {
            if (br.sector != EmissionSector::kReturn) continue;
            for (const auto& [b, amp] : br.state.terms()) {
                for (const auto& [m, n] : b.occupations()) EXPECT_EQ(m.tbin, v == 1.0 ? 0 : 1);
            }
        }
    }

    SourceConfig cfg;
    cfg.overlap_v = 0.3;
    for (const auto& br : spdc_pulse_sectors(cfg)) {
        if (br.sector != EmissionSector::kReturn) continue;
        double early = 0.0;
        for (const auto& [b, amp] : br.state.terms()) {
            if (b.occupation({"1", Pol::H, 0}) + b.occupation({"1", Pol::V, 0}) == 1)
                early += std::norm(amp);
        }
        EXPECT_NEAR(early, 0.3, 1e-12);
    }
}

// Series oracle: exp(cF F + cR R)|0> to second order has the double-return term cR^2 R^2/2 and
// the mixed term cF cR F R. With R = sqrt(v) R0 + sqrt(1-v) R1 and each Rk a normalized singlet
// creator, |R0^2|0>|^2 = (2!2! + 2!2! + 4)/4 = 3 and |R0 R1|0>|^2 = 1, so
// |R^2|0>|^2 = 3v^2 + 4v(1-v) + 3(1-v)^2.
TEST(Source, DoubleReturnWeightMatchesSeriesExpansion) {
    for (double v : {1.0, 0.75, 0.5, 0.0}) {
        for (double ratio : {1.0, 0.5, 2.0}) {
            SourceConfig cfg;
            cfg.chi_forward = 0.05;
            cfg.chi_return = 0.05 * ratio;
            cfg.overlap_v = v;
            double fr = 0.0;
            double rr = 0.0;
            double ff = 0.0;
            for (const auto& br : spdc_pulse_sectors(cfg)) {
                if (br.sector == EmissionSector::kForwardReturn) fr = br.state.weight();
                if (br.sector == EmissionSector::kDoubleReturn) rr = br.state.weight();
                if (br.sector == EmissionSector::kDoubleForward) ff = br.state.weight();
            }
            const double norm_rr = 3 * v * v + 4 * v * (1 - v) + 3 * (1 - v) * (1 - v);
            EXPECT_NEAR(rr / fr, norm_rr / 4.0 * ratio * ratio, 1e-12);
            EXPECT_NEAR(ff / fr, 3.0 / 4.0 / (ratio * ratio), 1e-12);
        }
    }
}

TEST(Source, DoubleReturnCanBeSwitchedOff) {
    SourceConfig cfg;
    cfg.emit_double_return = false;
    for (const auto& br : spdc_pulse_sectors(cfg)) EXPECT_NE(br.sector, EmissionSector::kDoubleReturn);
}
