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

#include "telesim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace telesim {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::set<std::string> occupied_paths(const StateVector& s) {
    std::set<std::string> paths;
    for (const auto& [basis, amp] : s.terms()) {
        for (const auto& [mode, n] : basis.occupations()) paths.insert(mode.path);
    }
    return paths;
}

}  // namespace

std::string ModeLabel::str() const {
    return path + (pol == Pol::H ? "H" : "V") + std::to_string(tbin);
}

// ---------------------------------------------------------------------------------------------
// FockBasisState

FockBasisState::FockBasisState(std::vector<std::pair<ModeLabel, int>> occupations) {
    std::sort(occupations.begin(), occupations.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [mode, n] : occupations) {
        if (n < 0) throw ValidationError("negative occupation on mode " + mode.str());
        if (!occ_.empty() && occ_.back().first == mode) {
            occ_.back().second += n;
        } else {
            occ_.emplace_back(std::move(mode), n);
        }
    }
    std::erase_if(occ_, [](const auto& e) { return e.second == 0; });
}

int FockBasisState::occupation(const ModeLabel& mode) const {
    auto it = std::lower_bound(occ_.begin(), occ_.end(), mode,
                               [](const auto& e, const ModeLabel& m) { return e.first < m; });
    return (it != occ_.end() && it->first == mode) ? it->second : 0;
}

int FockBasisState::total_photons() const {
    int total = 0;
    for (const auto& [mode, n] : occ_) total += n;
    return total;
}

int FockBasisState::photons_on_path(const std::string& path) const {
    int total = 0;
    for (const auto& [mode, n] : occ_) {
        if (mode.path == path) total += n;
    }
    return total;
}

FockBasisState FockBasisState::with_added(const ModeLabel& mode, int delta) const {
    auto occ = occ_;
    occ.emplace_back(mode, 0);
    for (auto& e : occ) {
        if (e.first == mode) {
            e.second += delta;
            break;
        }
    }
    return FockBasisState(std::move(occ));
}

std::string FockBasisState::str() const {
    if (occ_.empty()) return "vac";
    std::string out;
    for (const auto& [mode, n] : occ_) {
        if (!out.empty()) out += ',';
        out += mode.str() + ':' + std::to_string(n);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// PolarizationQubit

PolarizationQubit::PolarizationQubit(Complex alpha, Complex beta) {
    const double norm = std::norm(alpha) + std::norm(beta);
    if (std::abs(norm - 1.0) > 1e-12) {
        throw ValidationError("polarization qubit must satisfy |alpha|^2 + |beta|^2 = 1, got " +
                              std::to_string(norm));
    }
    amps_ << alpha, beta;
}

PolarizationQubit PolarizationQubit::linear(double angle) {
    return {std::cos(angle), std::sin(angle)};
}

PolarizationQubit PolarizationQubit::bloch(double theta, double phi) {
    return {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)};
}

PolarizationQubit PolarizationQubit::orthogonal() const {
    return {-std::conj(beta()), std::conj(alpha())};
}

// ---------------------------------------------------------------------------------------------
// StateVector

StateVector::StateVector(TermMap terms, double weight) : terms_(std::move(terms)) {
    set_weight(weight);
}

StateVector StateVector::vacuum() {
    StateVector s;
    s.add(FockBasisState{}, 1.0);
    return s;
}

Complex StateVector::amplitude(const FockBasisState& basis) const {
    auto it = terms_.find(basis);
    return it == terms_.end() ? Complex{} : it->second;
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto& [basis, amp] : terms_) total += std::norm(amp);
    return total;
}

void StateVector::add(const FockBasisState& basis, Complex amp) {
    terms_[basis] += amp;
}

void StateVector::set_weight(double w) {
    if (!(w >= 0.0) || w > 1.0 + 1e-12) {
        throw ValidationError("state weight must lie in [0, 1], got " + std::to_string(w));
    }
    weight_ = w;
}

void StateVector::prune(double threshold) {
    std::erase_if(terms_, [threshold](const auto& e) { return std::abs(e.second) < threshold; });
}

StateVector StateVector::normalized() const {
    const double n2 = norm_squared();
    if (n2 == 0.0) throw ValidationError("cannot normalize a zero state");
    return scaled(1.0 / std::sqrt(n2));
}

StateVector StateVector::scaled(Complex factor) const {
    StateVector out = *this;
    for (auto& [basis, amp] : out.terms_) amp *= factor;
    return out;
}

StateVector StateVector::restricted_to_photons(std::span<const std::string> paths, int n) const {
    StateVector out;
    out.weight_ = weight_;
    for (const auto& [basis, amp] : terms_) {
        int count = 0;
        for (const auto& p : paths) count += basis.photons_on_path(p);
        if (count == n) out.terms_.emplace(basis, amp);
    }
    return out;
}

StateVector operator+(const StateVector& a, const StateVector& b) {
    StateVector out = a;
    for (const auto& [basis, amp] : b.terms()) out.add(basis, amp);
    return out;
}

// ---------------------------------------------------------------------------------------------
// ModeMatrix / DetectorSpec

ModeMatrix::ModeMatrix(std::vector<ModeLabel> modes, Eigen::MatrixXcd entries)
    : modes_(std::move(modes)), entries_(std::move(entries)) {
    const auto d = static_cast<Eigen::Index>(modes_.size());
    if (entries_.rows() != d || entries_.cols() != d) {
        throw ValidationError("mode matrix dimension does not match its mode list");
    }
    for (int i = 0; i < static_cast<int>(modes_.size()); ++i) {
        if (!index_.emplace(modes_[i], i).second) {
            throw ValidationError("duplicate mode " + modes_[i].str() + " in mode matrix");
        }
    }
}

int ModeMatrix::index_of(const ModeLabel& mode) const {
    auto it = index_.find(mode);
    return it == index_.end() ? -1 : it->second;
}

bool ModeMatrix::is_unitary(double tol) const {
    const auto d = entries_.rows();
    return (entries_ * entries_.adjoint() - Eigen::MatrixXcd::Identity(d, d))
               .cwiseAbs()
               .maxCoeff() <= tol;
}

ModeMatrix ModeMatrix::adjoint() const {
    return ModeMatrix(modes_, entries_.adjoint());
}

void DetectorSpec::validate() const {
    if (monitored.empty()) throw ValidationError("detector " + id + " monitors no modes");
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw ValidationError("detector " + id + " efficiency must lie in [0, 1]");
    }
    if (!(dark_click_prob >= 0.0 && dark_click_prob <= 1.0)) {
        throw ValidationError("detector " + id + " dark-click probability must lie in [0, 1]");
    }
}

double DetectorSpec::click_probability(int photons) const {
    const double miss = std::pow(1.0 - efficiency, photons) * (1.0 - dark_click_prob);
    return 1.0 - miss;
}

std::vector<ModeLabel> path_modes(const std::string& path) {
    std::vector<ModeLabel> modes;
    for (int t = 0; t < kTemporalBins; ++t) {
        modes.push_back({path, Pol::H, t});
        modes.push_back({path, Pol::V, t});
    }
    return modes;
}

const StateVector& ConditionResult::conditional() const {
    if (branches.size() != 1) {
        throw ValidationError("conditional state has " + std::to_string(branches.size()) +
                              " branches, expected exactly one");
    }
    return branches.front();
}

// ---------------------------------------------------------------------------------------------
// Construction

StateVector make_qubit_photon(const PolarizationQubit& q, const std::string& path, int tbin) {
    StateVector s;
    s.add(FockBasisState({{ModeLabel{path, Pol::H, tbin}, 1}}), q.alpha());
    s.add(FockBasisState({{ModeLabel{path, Pol::V, tbin}, 1}}), q.beta());
    s.prune();
    return s;
}

StateVector make_psi_minus(const std::string& path_a, const std::string& path_b, int tbin) {
    if (path_a == path_b) throw ValidationError("psi-minus needs two distinct paths");
    const double h = 1.0 / std::sqrt(2.0);
    StateVector s;
    s.add(FockBasisState({{ModeLabel{path_a, Pol::H, tbin}, 1}, {ModeLabel{path_b, Pol::V, tbin}, 1}}),
          h);
    s.add(FockBasisState({{ModeLabel{path_a, Pol::V, tbin}, 1}, {ModeLabel{path_b, Pol::H, tbin}, 1}}),
          -h);
    return s;
}

StateVector tensor(const StateVector& s1, const StateVector& s2) {
    const auto p1 = occupied_paths(s1);
    for (const auto& p : occupied_paths(s2)) {
        if (p1.contains(p)) throw ValidationError("tensor factors share spatial path " + p);
    }
    StateVector out;
    for (const auto& [b1, a1] : s1.terms()) {
        for (const auto& [b2, a2] : s2.terms()) {
            auto occ = b1.occupations();
            occ.insert(occ.end(), b2.occupations().begin(), b2.occupations().end());
            out.add(FockBasisState(std::move(occ)), a1 * a2);
        }
    }
    out.set_weight(s1.weight() * s2.weight());
    out.prune();
    return out;
}

Complex inner(const StateVector& s1, const StateVector& s2) {
    Complex total{};
    for (const auto& [basis, amp] : s1.terms()) {
        total += std::conj(amp) * s2.amplitude(basis);
    }
    return total;
}

StateVector apply_creation(const StateVector& s, const ModeLabel& mode) {
    StateVector out;
    for (const auto& [basis, amp] : s.terms()) {
        const int n = basis.occupation(mode);
        out.add(basis.with_added(mode, 1), amp * std::sqrt(static_cast<double>(n + 1)));
    }
    out.set_weight(s.weight());
    return out;
}

// ---------------------------------------------------------------------------------------------
// Evolution

namespace {

using Occupation = std::vector<int>;
using Expansion = std::vector<std::pair<Occupation, Complex>>;

// Expands prod_k (a_k^dagger)^{n_k} / sqrt(n_k!) |0> under a_k^dagger -> sum_j m(j,k) a_j^dagger
// into normalized output occupations.
Expansion expand_creators(const Occupation& in,
                          const std::vector<std::vector<std::pair<int, Complex>>>& columns) {
    const auto d = in.size();
    double in_norm = 1.0;
    for (int n : in) in_norm *= factorial(n);

    std::map<Occupation, Complex> poly{{Occupation(d, 0), 1.0 / std::sqrt(in_norm)}};
    for (std::size_t k = 0; k < d; ++k) {
        for (int rep = 0; rep < in[k]; ++rep) {
            std::map<Occupation, Complex> next;
            for (const auto& [occ, c] : poly) {
                for (const auto& [j, mjk] : columns[k]) {
                    Occupation o = occ;
                    ++o[j];
                    next[o] += c * mjk;
                }
            }
            poly = std::move(next);
        }
    }

    Expansion out;
    out.reserve(poly.size());
    for (auto& [occ, c] : poly) {
        double out_norm = 1.0;
        for (int n : occ) out_norm *= factorial(n);
        out.emplace_back(occ, c * std::sqrt(out_norm));
    }
    return out;
}

}  // namespace

StateVector apply_mode_map(const StateVector& s, const ModeMatrix& m) {
    if (!m.is_unitary(1e-10)) throw ValidationError("mode matrix is not unitary within 1e-10");

    const auto& entries = m.entries();
    const auto d = m.modes().size();
    std::vector<std::vector<std::pair<int, Complex>>> columns(d);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t j = 0; j < d; ++j) {
            const Complex v = entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            if (v != Complex{}) columns[k].emplace_back(static_cast<int>(j), v);
        }
    }

    std::map<Occupation, Expansion> cache;
    StateVector out;
    for (const auto& [basis, amp] : s.terms()) {
        Occupation in(d, 0);
        std::vector<std::pair<ModeLabel, int>> rest;
        for (const auto& [mode, n] : basis.occupations()) {
            const int idx = m.index_of(mode);
            if (idx >= 0) {
                in[idx] = n;
            } else {
                rest.emplace_back(mode, n);
            }
        }
        auto it = cache.find(in);
        if (it == cache.end()) it = cache.emplace(in, expand_creators(in, columns)).first;

        for (const auto& [occ, c] : it->second) {
            auto full = rest;
            for (std::size_t j = 0; j < d; ++j) {
                if (occ[j] > 0) full.emplace_back(m.modes()[j], occ[j]);
            }
            out.add(FockBasisState(std::move(full)), amp * c);
        }
    }
    out.prune();
    out.set_weight(s.weight());
    return out;
}

// ---------------------------------------------------------------------------------------------
// Detection

namespace {

// Maps every monitored mode to the index of its detector in `detectors`.
std::map<ModeLabel, int> monitored_index(std::span<const DetectorSpec* const> detectors) {
    std::map<ModeLabel, int> index;
    for (int i = 0; i < static_cast<int>(detectors.size()); ++i) {
        detectors[i]->validate();
        for (const auto& mode : detectors[i]->monitored) {
            if (!index.emplace(mode, i).second) {
                throw ValidationError("mode " + mode.str() + " is monitored by two detectors");
            }
        }
    }
    return index;
}

std::vector<const DetectorSpec*> pointers(std::span<const DetectorSpec> detectors) {
    std::vector<const DetectorSpec*> out;
    for (const auto& d : detectors) out.push_back(&d);
    return out;
}

}  // namespace

ConditionResult condition_on_pattern(const StateVector& s, const ClickPattern& pattern,
                                     std::span<const DetectorSpec> detectors) {
    std::vector<const DetectorSpec*> selected;
    std::vector<Click> required;
    for (const auto& [id, click] : pattern) {
        auto it = std::find_if(detectors.begin(), detectors.end(),
                               [&](const DetectorSpec& d) { return d.id == id; });
        if (it == detectors.end()) throw ValidationError("unknown detector id " + id);
        selected.push_back(&*it);
        required.push_back(click);
    }
    const auto index = monitored_index(selected);

    // Group terms by the detected photon-number configuration.
    std::map<FockBasisState, StateVector> groups;
    for (const auto& [basis, amp] : s.terms()) {
        std::vector<std::pair<ModeLabel, int>> detected;
        std::vector<std::pair<ModeLabel, int>> rest;
        for (const auto& e : basis.occupations()) {
            (index.contains(e.first) ? detected : rest).push_back(e);
        }
        groups[FockBasisState(std::move(detected))].add(FockBasisState(std::move(rest)), amp);
    }

    ConditionResult result;
    for (auto& [config, rest] : groups) {
        std::vector<int> counts(selected.size(), 0);
        for (const auto& [mode, n] : config.occupations()) counts[index.at(mode)] += n;

        double factor = 1.0;
        for (std::size_t i = 0; i < selected.size(); ++i) {
            const double p_click = selected[i]->click_probability(counts[i]);
            factor *= required[i] == Click::kClick ? p_click : 1.0 - p_click;
        }
        const double w = rest.norm_squared() * factor;
        if (w <= 0.0) continue;
        result.probability += w;
        StateVector branch = rest.normalized();
        branch.set_weight(std::min(1.0, w * s.weight()));
        result.branches.push_back(std::move(branch));
    }
    return result;
}

std::map<std::vector<int>, double> photon_count_distribution(
    const StateVector& s, std::span<const DetectorSpec> detectors) {
    const auto ptrs = pointers(detectors);
    const auto index = monitored_index(ptrs);
    std::map<std::vector<int>, double> dist;
    for (const auto& [basis, amp] : s.terms()) {
        std::vector<int> counts(detectors.size(), 0);
        for (const auto& [mode, n] : basis.occupations()) {
            auto it = index.find(mode);
            if (it != index.end()) counts[it->second] += n;
        }
        dist[counts] += std::norm(amp);
    }
    return dist;
}

std::map<unsigned, double> click_pattern_distribution(const StateVector& s,
                                                      std::span<const DetectorSpec> detectors) {
    if (detectors.size() > 16) throw ValidationError("too many detectors for a pattern mask");
    const unsigned n_patterns = 1u << detectors.size();
    std::map<unsigned, double> dist;
    for (const auto& [counts, p] : photon_count_distribution(s, detectors)) {
        for (unsigned mask = 0; mask < n_patterns; ++mask) {
            double prob = p;
            for (std::size_t i = 0; i < detectors.size(); ++i) {
                const double p_click = detectors[i].click_probability(counts[i]);
                prob *= (mask >> i) & 1u ? p_click : 1.0 - p_click;
            }
            if (prob > 0.0) dist[mask] += prob;
        }
    }
    return dist;
}

// ---------------------------------------------------------------------------------------------
// Reduced states

std::optional<ReducedPolarization> reduced_polarization(const StateVector& s,
                                                        const std::string& path) {
    const double total = s.norm_squared();
    if (total == 0.0) return std::nullopt;

    // Key: everything except the photon on `path`, plus its temporal bin.
    std::map<std::pair<FockBasisState, int>, Eigen::Vector2cd> groups;
    for (const auto& [basis, amp] : s.terms()) {
        if (basis.photons_on_path(path) != 1) continue;
        std::vector<std::pair<ModeLabel, int>> rest;
        ModeLabel photon;
        for (const auto& e : basis.occupations()) {
            if (e.first.path == path) {
                photon = e.first;
            } else {
                rest.push_back(e);
            }
        }
        auto [it, inserted] =
            groups.try_emplace({FockBasisState(std::move(rest)), photon.tbin}, Eigen::Vector2cd::Zero());
        it->second[photon.pol == Pol::H ? 0 : 1] += amp;
    }

    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (const auto& [key, v] : groups) rho += v * v.adjoint();
    const double p = rho.trace().real();
    if (p <= 0.0) return std::nullopt;
    return ReducedPolarization{p / total, rho / p};
}

std::optional<ReducedPairPolarization> reduced_pair_polarization(const StateVector& s,
                                                                 const std::string& path_a,
                                                                 const std::string& path_b) {
    if (path_a == path_b) throw ValidationError("pair polarization needs two distinct paths");
    const double total = s.norm_squared();
    if (total == 0.0) return std::nullopt;

    std::map<std::tuple<FockBasisState, int, int>, Eigen::Vector4cd> groups;
    for (const auto& [basis, amp] : s.terms()) {
        if (basis.photons_on_path(path_a) != 1 || basis.photons_on_path(path_b) != 1) continue;
        std::vector<std::pair<ModeLabel, int>> rest;
        ModeLabel a;
        ModeLabel b;
        for (const auto& e : basis.occupations()) {
            if (e.first.path == path_a) {
                a = e.first;
            } else if (e.first.path == path_b) {
                b = e.first;
            } else {
                rest.push_back(e);
            }
        }
        auto [it, inserted] = groups.try_emplace({FockBasisState(std::move(rest)), a.tbin, b.tbin},
                                                 Eigen::Vector4cd::Zero());
        it->second[2 * static_cast<int>(a.pol) + static_cast<int>(b.pol)] += amp;
    }

    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (const auto& [key, v] : groups) rho += v * v.adjoint();
    const double p = rho.trace().real();
    if (p <= 0.0) return std::nullopt;
    return ReducedPairPolarization{p / total, rho / p};
}

bool is_density_matrix(const DensityMatrix2& rho, double tol) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rho.trace() - Complex{1.0}) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

double fidelity(const DensityMatrix2& rho, const PolarizationQubit& q) {
    if (!is_density_matrix(rho)) throw ValidationError("fidelity needs a valid density matrix");
    const auto& v = q.amplitudes();
    return (v.adjoint() * rho * v)(0, 0).real();
}

}  // namespace telesim
