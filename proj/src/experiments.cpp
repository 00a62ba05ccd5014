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

#include "telesim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "telesim/metrics.hpp"

namespace telesim {

namespace {

constexpr double kPi = std::numbers::pi;

// Detector id -> monitored path, in reporting order.
const std::vector<std::pair<std::string, std::string>> kTeleportDetectors{
    {"p", "p"}, {"f1", "1"}, {"f2", "2"}, {"d1", "d1"}, {"d2", "d2"}};
const std::vector<std::pair<std::string, std::string>> kSwapDetectors{
    {"f1", "1"}, {"f2", "2"}, {"D3plus", "d3p"}, {"D3minus", "d3m"}, {"D4", "4"}};

void add_detectors(Circuit& c, const std::vector<std::pair<std::string, std::string>>& layout,
                   const DetectorParams& params) {
    for (const auto* m : {&params.efficiency, &params.dark_click_prob}) {
        for (const auto& [id, value] : *m) {
            const bool known = std::any_of(layout.begin(), layout.end(),
                                           [&](const auto& entry) { return entry.first == id; });
            if (!known) throw ValidationError("unknown detector id '" + id + "'");
        }
    }
    for (const auto& [id, path] : layout) {
        const double eta = params.efficiency_of(id);
        if (eta < 1.0) {
            c.elements.push_back({ElementKind::kLoss, Stage::kDetectorLoss, "loss_" + id,
                                  loss_map(path, eta, "sink_" + id)});
        }
        c.detectors.push_back({id, path_modes(path), eta, params.dark_of(id)});
    }
}

ClickPattern clicks(std::initializer_list<std::string> ids) {
    ClickPattern p;
    for (const auto& id : ids) p[id] = Click::kClick;
    return p;
}

double sector_total(const std::vector<EmissionBranch>& sectors) {
    double total = 0.0;
    for (const auto& b : sectors) total += b.state.weight();
    return total;
}

// State of the single return-pass pair, including its temporal superposition.
StateVector return_pair(const SourceConfig& src) {
    const auto& [a, b] = src.return_paths;
    StateVector s = make_psi_minus(a, b, 0).scaled(std::sqrt(src.overlap_v)) +
                    make_psi_minus(a, b, 1).scaled(std::sqrt(1.0 - src.overlap_v));
    s.prune();
    return s;
}

// Normalized one-pair-per-pass state, independent of the chi values.
StateVector one_pair_each_pass(const SourceConfig& src) {
    return tensor(make_psi_minus(src.forward_paths.first, src.forward_paths.second, 0),
                  return_pair(src));
}

// Probability of a click on any of `any_of` together with every detector in `required`.
double prob_with_any(const StateVector& s, const ClickPattern& required,
                     const std::vector<std::string>& any_of, std::span<const DetectorSpec> dets) {
    ClickPattern none = required;
    for (const auto& id : any_of) none[id] = Click::kNoClick;
    return condition_on_pattern(s, required, dets).probability -
           condition_on_pattern(s, none, dets).probability;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Configuration

std::string_view to_string(InputSetting s) {
    switch (s) {
        case InputSetting::kH: return "H";
        case InputSetting::kV: return "V";
        case InputSetting::kPlus45: return "plus45";
        case InputSetting::kMinus45: return "minus45";
        case InputSetting::kR: return "R";
        case InputSetting::kCustom: return "custom";
    }
    return "?";
}

InputSetting parse_input_setting(std::string_view name) {
    for (auto s : {InputSetting::kH, InputSetting::kV, InputSetting::kPlus45,
                   InputSetting::kMinus45, InputSetting::kR, InputSetting::kCustom}) {
        if (to_string(s) == name) return s;
    }
    throw ValidationError("unknown input setting '" + std::string(name) +
                          "' (expected H, V, plus45, minus45, R or custom)");
}

double DetectorParams::efficiency_of(const std::string& id) const {
    auto it = efficiency.find(id);
    return it == efficiency.end() ? 1.0 : it->second;
}

double DetectorParams::dark_of(const std::string& id) const {
    auto it = dark_click_prob.find(id);
    return it == dark_click_prob.end() ? 0.0 : it->second;
}

void DetectorParams::validate() const {
    for (const auto& [id, eta] : efficiency) {
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw ValidationError("efficiency of detector " + id + " must lie in [0, 1]");
        }
    }
    for (const auto& [id, d] : dark_click_prob) {
        if (!(d >= 0.0 && d <= 1.0)) {
            throw ValidationError("dark-click probability of detector " + id + " must lie in [0, 1]");
        }
    }
}

PolarizationQubit TeleportConfig::input_qubit() const {
    const double h = 1.0 / std::sqrt(2.0);
    switch (setting) {
        case InputSetting::kH: return PolarizationQubit::horizontal();
        case InputSetting::kV: return PolarizationQubit::vertical();
        case InputSetting::kPlus45: return {h, h};
        case InputSetting::kMinus45: return {h, -h};
        case InputSetting::kR: return {h, Complex{0.0, h}};
        case InputSetting::kCustom:
            if (!custom) throw ValidationError("custom input setting needs a qubit");
            return *custom;
    }
    throw ValidationError("invalid input setting");
}

void TeleportConfig::validate() const {
    source.validate();
    detectors.validate();
    if (setting == InputSetting::kCustom && !custom) {
        throw ValidationError("custom input setting needs a qubit");
    }
}

std::vector<double> default_theta_grid(int steps) {
    if (steps < 1) throw ValidationError("theta grid needs at least one step");
    std::vector<double> grid;
    for (int k = 0; k < steps; ++k) grid.push_back(kPi * k / steps);
    return grid;
}

void SwapConfig::validate() const {
    if (theta_list.empty()) throw ValidationError("theta_list must not be empty");
    source.validate();
    detectors.validate();
}

// ---------------------------------------------------------------------------------------------
// Circuits

Circuit build_teleport_circuit(const TeleportConfig& cfg) {
    cfg.validate();
    Circuit c;
    c.name = "teleport";
    c.source = cfg.source;
    const std::string in = cfg.source.return_paths.first;
    const std::string alice = cfg.source.forward_paths.first;
    const std::string bob = cfg.source.forward_paths.second;

    auto polarizer = [&](double angle) {
        c.elements.push_back({ElementKind::kPolarizer, Stage::kPreparation, "input_polarizer",
                              polarizer_map(in, angle, "sink_pol1")});
    };
    switch (cfg.setting) {
        case InputSetting::kH: polarizer(0.0); break;
        case InputSetting::kV: polarizer(kPi / 2); break;
        case InputSetting::kPlus45: polarizer(kPi / 4); break;
        case InputSetting::kMinus45: polarizer(-kPi / 4); break;
        case InputSetting::kR:
            polarizer(0.0);
            c.elements.push_back({ElementKind::kQuarterWavePlate, Stage::kPreparation,
                                  "input_quarter_wave",
                                  waveplate_map(in, WaveplateKind::kQuarter, kPi / 4)});
            break;
        case InputSetting::kCustom:
            polarizer(0.0);
            c.elements.push_back({ElementKind::kPolarizationRotation, Stage::kPreparation,
                                  "input_rotation",
                                  polarization_unitary_map(in, rotation_from_horizontal(*cfg.custom))});
            break;
    }

    c.elements.push_back({ElementKind::kBeamsplitter, Stage::kBellAnalyzer, "bell_beamsplitter",
                          beamsplitter_map(in, alice)});

    const auto analysis = cfg.analysis_state.value_or(cfg.input_qubit());
    c.elements.push_back({ElementKind::kPolarizationRotation, Stage::kBobAnalysis,
                          "bob_analysis_plate",
                          polarization_unitary_map(bob, rotation_from_horizontal(analysis).adjoint())});
    c.elements.push_back({ElementKind::kPolarizingBeamsplitter, Stage::kBobAnalysis, "bob_pbs",
                          pbs_map(bob, "d1", "d2")});

    auto layout = kTeleportDetectors;
    layout[0].second = cfg.source.return_paths.second;
    layout[1].second = in;
    layout[2].second = alice;
    add_detectors(c, layout, cfg.detectors);
    return c;
}

Circuit build_swap_circuit(const SwapConfig& cfg, double theta) {
    cfg.validate();
    Circuit c;
    c.name = "swap";
    c.source = cfg.source;
    const auto& [p1, p4] = cfg.source.return_paths;
    const auto& [p2, p3] = cfg.source.forward_paths;

    // No polarizer on photon 1: it stays entangled with photon 4.
    c.elements.push_back({ElementKind::kBeamsplitter, Stage::kBellAnalyzer, "bell_beamsplitter",
                          beamsplitter_map(p1, p2)});
    c.elements.push_back({ElementKind::kHalfWavePlate, Stage::kBobAnalysis, "diagonal_half_wave",
                          waveplate_map(p3, WaveplateKind::kHalf, kPi / 8)});
    c.elements.push_back({ElementKind::kPolarizingBeamsplitter, Stage::kBobAnalysis, "bob_pbs",
                          pbs_map(p3, "d3p", "d3m")});
    c.elements.push_back({ElementKind::kPolarizer, Stage::kReferenceAnalysis, "theta_polarizer",
                          polarizer_map(p4, theta, "sink_pol4")});

    auto layout = kSwapDetectors;
    layout[0].second = p1;
    layout[1].second = p2;
    layout[4].second = p4;
    add_detectors(c, layout, cfg.detectors);
    return c;
}

Circuit build_swap_circuit(const SwapConfig& cfg) {
    cfg.validate();
    return build_swap_circuit(cfg, cfg.theta_list.front());
}

// ---------------------------------------------------------------------------------------------
// Exact runs

ExperimentReport run_teleport_exact(const TeleportConfig& cfg) {
    const Circuit circuit = build_teleport_circuit(cfg);
    const auto dets = circuit.detectors_after_loss();
    const auto q = cfg.input_qubit();
    const std::string bob = cfg.source.forward_paths.second;
    const auto sectors = spdc_pulse_sectors(cfg.source);
    const double total = sector_total(sectors);
    const auto threefold = clicks({"p", "f1", "f2"});

    ExperimentReport r;
    r.experiment = "teleport";
    r.overlap_v = cfg.source.overlap_v;

    // Sectors never share a detected configuration (each fixes the photon number on the
    // analyzer, Bob and trigger sides), so they are conditioned one at a time. Weights stay
    // unnormalized until the end.
    Eigen::Matrix2cd rho_acc = Eigen::Matrix2cd::Zero();
    double bob_single = 0.0;
    double threefold_raw = 0.0;
    double no_bob_raw = 0.0;
    double success_raw = 0.0;
    double failure_raw = 0.0;
    for (const auto& branch : sectors) {
        const double w = branch.state.weight();
        const StateVector before_bob =
            propagate(branch.state, circuit,
                      {Stage::kPreparation, Stage::kBellAnalyzer, Stage::kDetectorLoss});
        const auto cond = condition_on_pattern(before_bob, threefold, dets);
        threefold_raw += w * cond.probability;
        for (const auto& b : cond.branches) {
            const std::array<std::string, 1> bob_path{bob};
            no_bob_raw += b.weight() * b.restricted_to_photons(bob_path, 0).norm_squared();
            if (auto red = reduced_polarization(b, bob)) {
                rho_acc += b.weight() * red->p_single * red->rho;
                bob_single += b.weight() * red->p_single;
            }
        }

        const StateVector full = propagate(branch.state, circuit);
        auto success = threefold;
        success["d1"] = Click::kClick;
        success["d2"] = Click::kNoClick;
        auto failure = threefold;
        failure["d1"] = Click::kNoClick;
        failure["d2"] = Click::kClick;
        success_raw += w * condition_on_pattern(full, success, dets).probability;
        failure_raw += w * condition_on_pattern(full, failure, dets).probability;

        if (branch.sector == EmissionSector::kDoubleReturn) {
            r.crosstalk.spurious_threefold_prob = w * cond.probability / total;
            r.crosstalk.spurious_with_bob_click_prob =
                w * prob_with_any(full, threefold, {"d1", "d2"}, dets) / total;
        }
    }

    r.threefold_prob = threefold_raw / total;
    r.fourfold_probs["p,f1,f2,d1"] = success_raw / total;
    r.fourfold_probs["p,f1,f2,d2"] = failure_raw / total;
    if (threefold_raw > 0.0) r.no_bob_photon_fraction = no_bob_raw / threefold_raw;
    if (success_raw + failure_raw > 0.0) {
        r.fourfold_fidelity = success_raw / (success_raw + failure_raw);
    }
    if (bob_single > 0.0) {
        const DensityMatrix2 rho = rho_acc / bob_single;
        r.bob_conditional = rho;
        r.fidelity = fidelity(rho, q);

        // Bob's fringe along the great circle through the input state.
        const auto perp = q.orthogonal();
        std::vector<std::pair<double, double>> points;
        for (double t : default_theta_grid(16)) {
            const Eigen::Vector2cd phi =
                std::cos(t) * q.amplitudes() + std::sin(t) * perp.amplitudes();
            points.emplace_back(t, (phi.adjoint() * rho * phi)(0, 0).real());
        }
        r.visibility = fit_fringe(points).visibility;
    }

    // Efficiency: one pair per pass with photon 1 through its polarizer.
    {
        const StateVector prepared = propagate(one_pair_each_pass(cfg.source), circuit,
                                               {Stage::kPreparation});
        const std::array<std::string, 1> input_path{cfg.source.return_paths.first};
        const StateVector passed = prepared.restricted_to_photons(input_path, 1).normalized();
        const StateVector analyzed =
            propagate(passed, circuit, {Stage::kBellAnalyzer, Stage::kDetectorLoss});
        r.efficiency = condition_on_pattern(analyzed, clicks({"f1", "f2"}), dets).probability;
    }
    return r;
}

namespace {

struct SwapRates {
    double plus = 0.0;
    double minus = 0.0;
    double reference = 0.0;  // f1-f2-D4
};

// Raw (unnormalized by the sector total) fourfold rates of one state at one theta. `upstream`
// has already been through every stage except the photon-4 polarizer and the losses.
SwapRates swap_rates(const StateVector& upstream, const Circuit& circuit) {
    const StateVector s =
        propagate(upstream, circuit, {Stage::kReferenceAnalysis, Stage::kDetectorLoss});
    const auto dets = circuit.detectors_after_loss();
    SwapRates r;
    r.plus = condition_on_pattern(s, clicks({"f1", "f2", "D3plus", "D4"}), dets).probability;
    r.minus = condition_on_pattern(s, clicks({"f1", "f2", "D3minus", "D4"}), dets).probability;
    r.reference = condition_on_pattern(s, clicks({"f1", "f2", "D4"}), dets).probability;
    return r;
}

const Eigen::Vector4cd& singlet() {
    static const Eigen::Vector4cd v = [] {
        Eigen::Vector4cd s;
        s << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
        return s;
    }();
    return v;
}

}  // namespace

ExperimentReport run_swap_exact(const SwapConfig& cfg) {
    cfg.validate();
    const auto sectors = spdc_pulse_sectors(cfg.source);
    const double total = sector_total(sectors);
    const Circuit first = build_swap_circuit(cfg, cfg.theta_list.front());
    const auto dets = first.detectors_after_loss();
    const auto& [p1, p4] = cfg.source.return_paths;
    const auto& p3 = cfg.source.forward_paths.second;

    ExperimentReport r;
    r.experiment = "swap";
    r.overlap_v = cfg.source.overlap_v;

    std::vector<StateVector> upstream;
    Eigen::Matrix4cd rho34 = Eigen::Matrix4cd::Zero();
    double pair_weight = 0.0;
    for (const auto& branch : sectors) {
        upstream.push_back(propagate(branch.state, first,
                                     {Stage::kPreparation, Stage::kBellAnalyzer, Stage::kBobAnalysis}));

        // Photons 3 and 4 before their analyzers, given the analyzer coincidence.
        const StateVector bsm = propagate(branch.state, first,
                                          {Stage::kBellAnalyzer, Stage::kDetectorLoss});
        for (const auto& b : condition_on_pattern(bsm, clicks({"f1", "f2"}), dets).branches) {
            if (auto red = reduced_pair_polarization(b, p3, p4)) {
                rho34 += b.weight() * red->probability * red->rho;
                pair_weight += b.weight() * red->probability;
            }
        }
    }
    if (pair_weight > 0.0) {
        r.singlet_fraction = (singlet().adjoint() * (rho34 / pair_weight) * singlet())(0, 0).real();
    }

    for (double theta : cfg.theta_list) {
        const Circuit circuit = build_swap_circuit(cfg, theta);
        FringePoint pt{theta, 0.0, 0.0};
        double reference = 0.0;
        for (std::size_t i = 0; i < sectors.size(); ++i) {
            const auto rates = swap_rates(upstream[i], circuit);
            const double w = sectors[i].state.weight() / total;
            pt.rate_plus += w * rates.plus;
            pt.rate_minus += w * rates.minus;
            reference += w * rates.reference;

            if (theta == cfg.theta_list.front() &&
                sectors[i].sector == EmissionSector::kDoubleReturn) {
                const StateVector s = propagate(upstream[i], circuit,
                                                {Stage::kReferenceAnalysis, Stage::kDetectorLoss});
                r.crosstalk.spurious_threefold_prob = w * rates.reference;
                r.crosstalk.spurious_with_bob_click_prob =
                    w * prob_with_any(s, clicks({"f1", "f2", "D4"}), {"D3plus", "D3minus"}, dets);
            }
        }
        if (theta == cfg.theta_list.front()) {
            r.threefold_prob = reference;
            r.fourfold_probs["f1,f2,D3plus,D4"] = pt.rate_plus;
            r.fourfold_probs["f1,f2,D3minus,D4"] = pt.rate_minus;
        }
        r.fringe_points.push_back(pt);
    }

    if (r.fringe_points.size() >= 4) {
        std::vector<std::pair<double, double>> plus;
        std::vector<std::pair<double, double>> minus;
        for (const auto& pt : r.fringe_points) {
            plus.emplace_back(pt.theta, pt.rate_plus);
            minus.emplace_back(pt.theta, pt.rate_minus);
        }
        const bool any_counts = std::any_of(r.fringe_points.begin(), r.fringe_points.end(),
                                            [](const FringePoint& p) { return p.rate_plus + p.rate_minus > 0.0; });
        if (any_counts) {
            r.fit_plus = fit_fringe(plus);
            r.fit_minus = fit_fringe(minus);
            r.visibility = 0.5 * (r.fit_plus->visibility + r.fit_minus->visibility);
            r.fidelity = fidelity_from_visibility(std::clamp(*r.visibility, 0.0, 1.0));
        }
    }

    {
        const StateVector analyzed = propagate(one_pair_each_pass(cfg.source), first,
                                               {Stage::kBellAnalyzer, Stage::kDetectorLoss});
        r.efficiency = condition_on_pattern(analyzed, clicks({"f1", "f2"}), dets).probability;
    }
    return r;
}

// ---------------------------------------------------------------------------------------------
// Calibration

namespace {

Calibration bisect_overlap(const std::function<double(double)>& measure, double target,
                           double tol) {
    double lo = 0.0;
    double hi = 1.0;
    const double f_lo = measure(lo);
    const double f_hi = measure(hi);
    if (target < f_lo - tol || target > f_hi + tol) {
        throw ValidationError("calibration target " + std::to_string(target) +
                              " is outside the reachable range [" + std::to_string(f_lo) + ", " +
                              std::to_string(f_hi) + "]");
    }
    Calibration cal;
    for (cal.iterations = 1; cal.iterations <= 60; ++cal.iterations) {
        const double mid = 0.5 * (lo + hi);
        const double f = measure(mid);
        cal.overlap_v = mid;
        cal.achieved = f;
        if (std::abs(f - target) <= tol) {
            cal.converged = true;
            return cal;
        }
        (f < target ? lo : hi) = mid;
    }
    return cal;
}

}  // namespace

Calibration calibrate_teleport_fidelity(TeleportConfig cfg, double target, double tol) {
    cfg.validate();
    return bisect_overlap(
        [&](double v) {
            cfg.source.overlap_v = v;
            const auto report = run_teleport_exact(cfg);
            if (!report.fidelity) throw ValidationError("teleport fidelity is undefined");
            return *report.fidelity;
        },
        target, tol);
}

Calibration calibrate_swap_visibility(SwapConfig cfg, double target, double tol) {
    cfg.validate();
    return bisect_overlap(
        [&](double v) {
            cfg.source.overlap_v = v;
            const auto report = run_swap_exact(cfg);
            if (!report.visibility) throw ValidationError("swap visibility is undefined");
            return *report.visibility;
        },
        target, tol);
}

// ---------------------------------------------------------------------------------------------
// Random-photon baseline

RandomPhotonBaseline random_photon_baseline(const SwapConfig& cfg) {
    cfg.validate();
    // Fourfolds need one pair per pass, so only that sector is replayed. Its forward pair is
    // replaced by independent unpolarized photons: the uniform average over polarizations equals
    // the equal mixture of H and V, taken for both photons.
    const auto sectors = spdc_pulse_sectors(cfg.source);
    double sector_prob = 0.0;
    for (const auto& b : sectors) {
        if (b.sector == EmissionSector::kForwardReturn) sector_prob = b.state.weight();
    }
    sector_prob /= sector_total(sectors);

    const auto& [p2, p3] = cfg.source.forward_paths;
    std::vector<StateVector> mixture;
    for (const auto& a : {PolarizationQubit::horizontal(), PolarizationQubit::vertical()}) {
        for (const auto& b : {PolarizationQubit::horizontal(), PolarizationQubit::vertical()}) {
            mixture.push_back(tensor(tensor(make_qubit_photon(a, p2), make_qubit_photon(b, p3)),
                                     return_pair(cfg.source)));
        }
    }

    const Circuit first = build_swap_circuit(cfg, cfg.theta_list.front());
    std::vector<StateVector> upstream;
    for (const auto& s : mixture) {
        upstream.push_back(propagate(s, first,
                                     {Stage::kPreparation, Stage::kBellAnalyzer, Stage::kBobAnalysis}));
    }
    const double w = sector_prob / static_cast<double>(mixture.size());

    RandomPhotonBaseline out;
    for (double theta : cfg.theta_list) {
        const Circuit circuit = build_swap_circuit(cfg, theta);
        FringePoint pt{theta, 0.0, 0.0};
        for (const auto& s : upstream) {
            const auto rates = swap_rates(s, circuit);
            pt.rate_plus += w * rates.plus;
            pt.rate_minus += w * rates.minus;
            out.arm_rate += w * rates.reference;
        }
        out.fringe_points.push_back(pt);
    }
    out.arm_rate /= static_cast<double>(cfg.theta_list.size());

    const auto dets = first.detectors_after_loss();
    for (const auto& s : upstream) {
        const StateVector lossy = propagate(s, first, {Stage::kDetectorLoss});
        out.unpolarized_arm_rate +=
            w * condition_on_pattern(lossy, clicks({"f1", "f2", "D4"}), dets).probability;
    }
    return out;
}

}  // namespace telesim
