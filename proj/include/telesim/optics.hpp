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

#ifndef TELESIM_OPTICS_HPP
#define TELESIM_OPTICS_HPP

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "telesim/fock.hpp"

namespace telesim {

enum class WaveplateKind { kHalf, kQuarter };

/// Jones matrix of a wave plate with its fast axis at `angle` from horizontal:
/// R(angle) diag(1, e^{-i delta}) R(-angle), delta = pi (half) or pi/2 (quarter).
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, 2, 2> waveplate_jones(WaveplateKind kind, Scalar angle) {
    using C = std::complex<Scalar>;
    using std::cos;
    using std::sin;
    const Scalar c = cos(angle);
    const Scalar s = sin(angle);
    Eigen::Matrix<C, 2, 2> rot;
    rot << c, -s, s, c;
    const C retard = kind == WaveplateKind::kHalf ? C(-1) : C(0, -1);
    Eigen::Matrix<C, 2, 2> diag = Eigen::Matrix<C, 2, 2>::Identity();
    diag(1, 1) = retard;
    return rot * diag * rot.adjoint();
}

/// 2x2 unitary taking |H> to `q` (and |V> to q's orthogonal partner).
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, 2, 2> rotation_from_horizontal(const PolarizationQubit& q) {
    Eigen::Matrix<std::complex<Scalar>, 2, 2> u;
    const auto perp = q.orthogonal();
    u << q.alpha(), perp.alpha(), q.beta(), perp.beta();
    return u;
}

/// 50/50 beamsplitter mixing ports A and B in place (outputs keep the input path names).
/// Transmission 1/sqrt(2), reflection i/sqrt(2), identical on every (pol, tbin) pair.
ModeMatrix beamsplitter_map(const std::string& port_a, const std::string& port_b);

ModeMatrix waveplate_map(const std::string& path, WaveplateKind kind, double angle);

/// Arbitrary polarization unitary `u` applied on `path` in every temporal bin.
ModeMatrix polarization_unitary_map(const std::string& path, const Eigen::Matrix2cd& u);

/// Polarizing beamsplitter: H of `path_in` goes to `path_out_h`, V to `path_out_v`.
ModeMatrix pbs_map(const std::string& path_in, const std::string& path_out_h,
                   const std::string& path_out_v);

/// Linear polarizer at `angle`. The rejected polarization is swapped into `sink`.
ModeMatrix polarizer_map(const std::string& path, double angle, const std::string& sink);

/// Amplitude sqrt(eta) stays on `path`; the rest is routed into `sink`.
ModeMatrix loss_map(const std::string& path, double eta, const std::string& sink);

/// Dual-pass down-conversion source. Pairs are emitted in the antisymmetric polarization state.
struct SourceConfig {
    double chi_forward = 0.01;
    double chi_return = 0.01;
    std::pair<std::string, std::string> forward_paths{"2", "3"};
    std::pair<std::string, std::string> return_paths{"1", "p"};
    /// Temporal overlap of return-pass photons with the forward pass: they are created in
    /// sqrt(v)|t0> + sqrt(1-v)|t1>.
    double overlap_v = 1.0;
    /// When false the double-return-pair term is left out of the series (for cross-talk
    /// comparisons).
    bool emit_double_return = true;

    void validate() const;
};

/// Pair-number sectors kept by the two-pair truncation.
enum class EmissionSector {
    kVacuum,
    kForward,
    kReturn,
    kForwardReturn,
    kDoubleForward,
    kDoubleReturn,
};

const char* to_string(EmissionSector sector);
int forward_pairs(EmissionSector sector);
int return_pairs(EmissionSector sector);
/// Total number of pairs in the sector.
inline int pair_count(EmissionSector sector) { return forward_pairs(sector) + return_pairs(sector); }

struct EmissionBranch {
    EmissionSector sector;
    /// Normalized state. weight() holds the unnormalized squared amplitude of the sector in the
    /// truncated series, so sector probabilities are weight / sum of weights.
    StateVector state;
};

/// Sectors of the truncated pulse state with nonzero weight, in EmissionSector order.
std::vector<EmissionBranch> spdc_pulse_sectors(const SourceConfig& cfg);

/// Coherent pulse state truncated at two pairs and renormalized. Probabilities differ from the
/// untruncated squeezing series by O(chi^4); three-pair emission is dropped.
StateVector spdc_pulse_state(const SourceConfig& cfg);

}  // namespace telesim

#endif  // TELESIM_OPTICS_HPP
