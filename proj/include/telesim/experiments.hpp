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

#ifndef TELESIM_EXPERIMENTS_HPP
#define TELESIM_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "telesim/circuit.hpp"
#include "telesim/report.hpp"

namespace telesim {

enum class InputSetting { kH, kV, kPlus45, kMinus45, kR, kCustom };

std::string_view to_string(InputSetting s);
/// Accepts H, V, plus45, minus45, R, custom. Throws ValidationError otherwise.
InputSetting parse_input_setting(std::string_view name);

/// Per-detector parameters keyed by detector id; missing ids default to efficiency 1 and no
/// dark clicks.
struct DetectorParams {
    std::map<std::string, double> efficiency;
    std::map<std::string, double> dark_click_prob;

    double efficiency_of(const std::string& id) const;
    double dark_of(const std::string& id) const;
    void validate() const;
};

/// Teleportation setup: trigger p, analyzer detectors f1/f2 behind the beamsplitter, Bob's
/// analyzer d1/d2 behind a PBS on path 3.
struct TeleportConfig {
    InputSetting setting = InputSetting::kH;
    /// Required when setting is kCustom.
    std::optional<PolarizationQubit> custom;
    SourceConfig source{};
    DetectorParams detectors;
    /// State routed to d1 by Bob's analyzer. Defaults to the input qubit, so d1 counts successes.
    std::optional<PolarizationQubit> analysis_state;

    PolarizationQubit input_qubit() const;
    void validate() const;
};

/// Theta grid k pi / steps, k = 0 .. steps-1.
std::vector<double> default_theta_grid(int steps = 16);

/// Entanglement swapping: analyzer f1/f2 on paths 1, 2; photon 3 analyzed at +-45 degrees
/// (D3plus, D3minus); photon 4 behind a polarizer at theta (D4).
struct SwapConfig {
    std::vector<double> theta_list = default_theta_grid();
    SourceConfig source{0.01, 0.01, {"2", "3"}, {"1", "4"}, 1.0, true};
    DetectorParams detectors;

    void validate() const;
};

Circuit build_teleport_circuit(const TeleportConfig& cfg);
/// Circuit with the photon-4 polarizer at `theta`.
Circuit build_swap_circuit(const SwapConfig& cfg, double theta);
/// Circuit at the first angle of cfg.theta_list.
Circuit build_swap_circuit(const SwapConfig& cfg);

ExperimentReport run_teleport_exact(const TeleportConfig& cfg);
ExperimentReport run_swap_exact(const SwapConfig& cfg);

struct Calibration {
    double overlap_v = 0.0;
    double achieved = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bisection on overlap_v until the reported fidelity is within `tol` of `target`. Throws
/// ValidationError when the target lies outside [F(v=0), F(v=1)].
Calibration calibrate_teleport_fidelity(TeleportConfig cfg, double target, double tol = 1e-4);
/// Same for the mean swapping fringe visibility.
Calibration calibrate_swap_visibility(SwapConfig cfg, double target, double tol = 1e-4);

// Classical baselines ------------------------------------------------------------------------

/// Expected fidelity of measuring `q` in the basis {b, b_perp} and resending the outcome.
double classical_measure_resend(const PolarizationQubit& q, const PolarizationQubit& basis);
/// Average of classical_measure_resend in the H/V basis over `samples` uniformly random qubits.
double haar_average_fidelity(std::int64_t samples, std::uint64_t seed);

struct RandomPhotonBaseline {
    std::vector<FringePoint> fringe_points;
    /// f1-f2-D4 coincidence rate with the photon-4 polarizer in place, averaged over theta.
    double arm_rate = 0.0;
    /// Same with the polarizer removed.
    double unpolarized_arm_rate = 0.0;
};

/// Swapping scan with Bob's photon replaced by a uniformly random polarization on every event.
RandomPhotonBaseline random_photon_baseline(const SwapConfig& cfg);

}  // namespace telesim

#endif  // TELESIM_EXPERIMENTS_HPP
