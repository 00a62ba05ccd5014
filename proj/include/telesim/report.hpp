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

// Plain result types shared by the experiment runners, metrics and report emitters.

#ifndef TELESIM_REPORT_HPP
#define TELESIM_REPORT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "telesim/fock.hpp"

namespace telesim {

/// rate(theta) = offset * (1 + visibility * cos(2 (theta - phase))).
struct FringeFit {
    double visibility = 0.0;
    double phase = 0.0;
    double offset = 0.0;
    double residual = 0.0;
    /// False when the data carry no modulation, so the phase means nothing.
    bool phase_defined = true;
};

struct FringePoint {
    double theta = 0.0;
    double rate_plus = 0.0;
    double rate_minus = 0.0;
};

/// Spurious threefolds come from two pairs emitted on the return pass: Alice's analyzer fires
/// but nothing reaches Bob.
struct CrosstalkStats {
    double spurious_threefold_prob = 0.0;
    double spurious_with_bob_click_prob = 0.0;

    /// 1 - with_bob_click / threefold, defined as 1 when there are no spurious threefolds.
    double rejection() const {
        if (spurious_threefold_prob <= 0.0) return 1.0;
        return 1.0 - spurious_with_bob_click_prob / spurious_threefold_prob;
    }
};

struct ExperimentReport {
    std::string experiment;
    double overlap_v = 1.0;

    /// Trigger plus both analyzer detectors, per pulse.
    double threefold_prob = 0.0;
    std::map<std::string, double> fourfold_probs;

    /// Teleportation only: Bob's polarization state given the threefold and one photon at Bob.
    std::optional<DensityMatrix2> bob_conditional;
    /// Swapping only.
    std::vector<FringePoint> fringe_points;
    std::optional<FringeFit> fit_plus;
    std::optional<FringeFit> fit_minus;
    /// Swapping only: <psi-|rho_34|psi-> given the analyzer coincidence.
    std::optional<double> singlet_fraction;

    /// Undefined when no conditioned event can happen.
    std::optional<double> fidelity;
    /// Fidelity estimated from fourfold counts behind Bob's analyzer.
    std::optional<double> fourfold_fidelity;
    std::optional<double> visibility;
    double efficiency = 0.0;
    CrosstalkStats crosstalk;
    /// Fraction of threefolds in which no photon reaches Bob. Diagnostic only; never folded
    /// into the fidelity.
    double no_bob_photon_fraction = 0.0;
};

}  // namespace telesim

#endif  // TELESIM_REPORT_HPP
