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

#include <array>

namespace telesim {

namespace {

// Builds a map over `paths` x {H, V} x tbins from a (2P x 2P) block acting on index
// 2 * path_index + pol, repeated identically in every temporal bin.
ModeMatrix per_bin(const std::vector<std::string>& paths, const Eigen::MatrixXcd& block) {
    const auto width = static_cast<Eigen::Index>(2 * paths.size());
    std::vector<ModeLabel> modes;
    for (int t = 0; t < kTemporalBins; ++t) {
        for (const auto& p : paths) {
            modes.push_back({p, Pol::H, t});
            modes.push_back({p, Pol::V, t});
        }
    }
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(width * kTemporalBins, width * kTemporalBins);
    for (int t = 0; t < kTemporalBins; ++t) {
        full.block(t * width, t * width, width, width) = block;
    }
    return ModeMatrix(std::move(modes), std::move(full));
}

void require_distinct(const std::vector<std::string>& paths, const char* what) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            if (paths[i] == paths[j]) {
                throw ValidationError(std::string(what) + " needs distinct paths, got '" +
                                      paths[i] + "' twice");
            }
        }
    }
}

}  // namespace

ModeMatrix beamsplitter_map(const std::string& port_a, const std::string& port_b) {
    require_distinct({port_a, port_b}, "beamsplitter");
    const double t = 1.0 / std::sqrt(2.0);
    const Complex r{0.0, 1.0 / std::sqrt(2.0)};
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(4, 4);
    for (int pol = 0; pol < 2; ++pol) {
        block(pol, pol) = t;
        block(2 + pol, 2 + pol) = t;
        block(2 + pol, pol) = r;
        block(pol, 2 + pol) = r;
    }
    return per_bin({port_a, port_b}, block);
}

ModeMatrix polarization_unitary_map(const std::string& path, const Eigen::Matrix2cd& u) {
    if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
        throw ValidationError("polarization transform on path " + path + " is not unitary");
    }
    return per_bin({path}, u);
}

ModeMatrix waveplate_map(const std::string& path, WaveplateKind kind, double angle) {
    return per_bin({path}, waveplate_jones(kind, angle));
}

ModeMatrix pbs_map(const std::string& path_in, const std::string& path_out_h,
                   const std::string& path_out_v) {
    require_distinct({path_in, path_out_h, path_out_v}, "polarizing beamsplitter");
    // Index layout: in(H,V)=0,1  outH(H,V)=2,3  outV(H,V)=4,5. Swap inH<->outH_H, inV<->outV_V.
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Identity(6, 6);
    const std::array<std::pair<int, int>, 2> swaps{{{0, 2}, {1, 5}}};
    for (auto [a, b] : swaps) {
        block(a, a) = 0.0;
        block(b, b) = 0.0;
        block(a, b) = 1.0;
        block(b, a) = 1.0;
    }
    return per_bin({path_in, path_out_h, path_out_v}, block);
}

ModeMatrix polarizer_map(const std::string& path, double angle, const std::string& sink) {
    require_distinct({path, sink}, "polarizer");
    Eigen::Vector2cd pass;
    pass << std::cos(angle), std::sin(angle);
    const Eigen::Matrix2cd keep = pass * pass.adjoint();
    const Eigen::Matrix2cd reject = Eigen::Matrix2cd::Identity() - keep;
    Eigen::MatrixXcd block(4, 4);
    block << keep, reject, reject, keep;
    return per_bin({path, sink}, block);
}

ModeMatrix loss_map(const std::string& path, double eta, const std::string& sink) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ValidationError("loss transmissivity must lie in [0, 1], got " + std::to_string(eta));
    }
    require_distinct({path, sink}, "loss element");
    const double keep = std::sqrt(eta);
    const double leak = std::sqrt(1.0 - eta);
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(4, 4);
    for (int pol = 0; pol < 2; ++pol) {
        block(pol, pol) = keep;
        block(2 + pol, 2 + pol) = keep;
        block(2 + pol, pol) = leak;
        block(pol, 2 + pol) = -leak;
    }
    return per_bin({path, sink}, block);
}

// ---------------------------------------------------------------------------------------------
// Source

void SourceConfig::validate() const {
    auto in_range = [](double chi) { return chi >= 0.0 && chi <= 0.2; };
    if (!in_range(chi_forward)) throw ValidationError("chi_forward must lie in [0, 0.2]");
    if (!in_range(chi_return)) throw ValidationError("chi_return must lie in [0, 0.2]");
    if (!(overlap_v >= 0.0 && overlap_v <= 1.0)) {
        throw ValidationError("overlap_v must lie in [0, 1]");
    }
    require_distinct({forward_paths.first, forward_paths.second, return_paths.first,
                      return_paths.second},
                     "source");
}

const char* to_string(EmissionSector sector) {
    switch (sector) {
        case EmissionSector::kVacuum: return "vacuum";
        case EmissionSector::kForward: return "forward";
        case EmissionSector::kReturn: return "return";
        case EmissionSector::kForwardReturn: return "forward_return";
        case EmissionSector::kDoubleForward: return "double_forward";
        case EmissionSector::kDoubleReturn: return "double_return";
    }
    return "?";
}

int forward_pairs(EmissionSector sector) {
    switch (sector) {
        case EmissionSector::kForward:
        case EmissionSector::kForwardReturn: return 1;
        case EmissionSector::kDoubleForward: return 2;
        default: return 0;
    }
}

int return_pairs(EmissionSector sector) {
    switch (sector) {
        case EmissionSector::kReturn:
        case EmissionSector::kForwardReturn: return 1;
        case EmissionSector::kDoubleReturn: return 2;
        default: return 0;
    }
}

namespace {

struct PairTerm {
    double coeff;
    ModeLabel a;
    ModeLabel b;
};

// Creation operator for one antisymmetric pair on (a, b) with the given temporal amplitudes.
std::vector<PairTerm> pair_creator(const std::pair<std::string, std::string>& paths,
                                   std::span<const double> bin_amps) {
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<PairTerm> ops;
    for (int t = 0; t < static_cast<int>(bin_amps.size()); ++t) {
        if (bin_amps[t] == 0.0) continue;
        ops.push_back({h * bin_amps[t], {paths.first, Pol::H, t}, {paths.second, Pol::V, t}});
        ops.push_back({-h * bin_amps[t], {paths.first, Pol::V, t}, {paths.second, Pol::H, t}});
    }
    return ops;
}

StateVector apply_pair(const StateVector& s, const std::vector<PairTerm>& op) {
    StateVector out;
    for (const auto& term : op) {
        const auto created = apply_creation(apply_creation(s, term.a), term.b);
        for (const auto& [basis, amp] : created.terms()) out.add(basis, term.coeff * amp);
    }
    return out;
}

}  // namespace

std::vector<EmissionBranch> spdc_pulse_sectors(const SourceConfig& cfg) {
    cfg.validate();
    const std::array<double, 1> forward_bins{1.0};
    const std::array<double, 2> return_bins{std::sqrt(cfg.overlap_v),
                                            std::sqrt(1.0 - cfg.overlap_v)};
    const auto forward = pair_creator(cfg.forward_paths, forward_bins);
    const auto ret = pair_creator(cfg.return_paths, return_bins);

    std::vector<EmissionBranch> sectors;
    for (auto sector : {EmissionSector::kVacuum, EmissionSector::kForward, EmissionSector::kReturn,
                        EmissionSector::kForwardReturn, EmissionSector::kDoubleForward,
                        EmissionSector::kDoubleReturn}) {
        if (sector == EmissionSector::kDoubleReturn && !cfg.emit_double_return) continue;
        const int nf = forward_pairs(sector);
        const int nr = return_pairs(sector);
        // Term of exp(chi_f F + chi_r R)|0> with nf forward and nr return pairs.
        double prefactor = std::pow(cfg.chi_forward, nf) * std::pow(cfg.chi_return, nr);
        if (nf == 2 || nr == 2) prefactor /= 2.0;
        if (prefactor == 0.0) continue;

        StateVector raw = StateVector::vacuum();
        for (int i = 0; i < nf; ++i) raw = apply_pair(raw, forward);
        for (int i = 0; i < nr; ++i) raw = apply_pair(raw, ret);
        raw.prune();
        const double weight = prefactor * prefactor * raw.norm_squared();
        if (weight == 0.0) continue;

        StateVector state = raw.normalized();
        state.set_weight(weight);
        sectors.push_back({sector, std::move(state)});
    }
    return sectors;
}

StateVector spdc_pulse_state(const SourceConfig& cfg) {
    const auto sectors = spdc_pulse_sectors(cfg);
    double total = 0.0;
    for (const auto& b : sectors) total += b.state.weight();
    StateVector out;
    for (const auto& b : sectors) {
        const double scale = std::sqrt(b.state.weight() / total);
        for (const auto& [basis, amp] : b.state.terms()) out.add(basis, scale * amp);
    }
    out.prune();
    return out;
}

}  // namespace telesim
