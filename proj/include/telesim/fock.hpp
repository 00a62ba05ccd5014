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

#ifndef TELESIM_FOCK_HPP
#define TELESIM_FOCK_HPP

#include <complex>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace telesim {

using Complex = std::complex<double>;

/// Thrown for any argument that violates a documented precondition.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Terms whose magnitude falls below this are dropped after every optical element.
inline constexpr double kPruneThreshold = 1e-14;

/// Number of temporal bins carried by every spatial path.
inline constexpr int kTemporalBins = 2;

enum class Pol : unsigned char { H = 0, V = 1 };

/// One optical mode: spatial path, polarization, temporal bin.
struct ModeLabel {
    std::string path;
    Pol pol = Pol::H;
    int tbin = 0;

    auto operator<=>(const ModeLabel&) const = default;
    bool operator==(const ModeLabel&) const = default;

    std::string str() const;
};

/// Occupation-number assignment. Only nonzero counts are stored, sorted by mode.
class FockBasisState {
public:
    FockBasisState() = default;
    explicit FockBasisState(std::vector<std::pair<ModeLabel, int>> occupations);

    int occupation(const ModeLabel& mode) const;
    int total_photons() const;
    /// Photons in every mode of `path`, summed over polarization and temporal bin.
    int photons_on_path(const std::string& path) const;
    FockBasisState with_added(const ModeLabel& mode, int delta) const;

    const std::vector<std::pair<ModeLabel, int>>& occupations() const { return occ_; }
    bool empty() const { return occ_.empty(); }

    /// Canonical serialization, e.g. "1H0:1,3V0:1".
    std::string str() const;

    auto operator<=>(const FockBasisState&) const = default;
    bool operator==(const FockBasisState&) const = default;

private:
    std::vector<std::pair<ModeLabel, int>> occ_;
};

/// A normalized polarization qubit alpha|H> + beta|V>.
class PolarizationQubit {
public:
    /// Throws ValidationError unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
    PolarizationQubit(Complex alpha, Complex beta);

    static PolarizationQubit horizontal() { return {1.0, 0.0}; }
    static PolarizationQubit vertical() { return {0.0, 1.0}; }
    /// Linear polarization at `angle` radians from horizontal.
    static PolarizationQubit linear(double angle);
    /// Point on the Bloch sphere: cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>.
    static PolarizationQubit bloch(double theta, double phi);

    Complex alpha() const { return amps_[0]; }
    Complex beta() const { return amps_[1]; }
    const Eigen::Vector2cd& amplitudes() const { return amps_; }
    /// The state orthogonal to this one, (-conj(beta), conj(alpha)).
    PolarizationQubit orthogonal() const;

private:
    Eigen::Vector2cd amps_;
};

/// Sparse complex amplitude map over Fock basis states.
///
/// `weight` is a nonnegative probability weight carried alongside the amplitudes. States
/// produced by construction carry weight 1; emission sectors and conditional branches use
/// it to record how much probability they stand for.
class StateVector {
public:
    using TermMap = std::map<FockBasisState, Complex>;

    StateVector() = default;
    explicit StateVector(TermMap terms, double weight = 1.0);

    static StateVector vacuum();

    const TermMap& terms() const { return terms_; }
    double weight() const { return weight_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Complex amplitude(const FockBasisState& basis) const;
    double norm_squared() const;

    /// Adds `amp` to the amplitude of `basis` (creating the term if needed).
    void add(const FockBasisState& basis, Complex amp);
    void set_weight(double w);
    void prune(double threshold = kPruneThreshold);

    StateVector normalized() const;
    StateVector scaled(Complex factor) const;

    /// Restriction to basis states with exactly `n` photons summed over `paths`.
    StateVector restricted_to_photons(std::span<const std::string> paths, int n) const;

private:
    TermMap terms_;
    double weight_ = 1.0;
};

StateVector operator+(const StateVector& a, const StateVector& b);

/// Linear map on a subset of modes. Entry (j, k) is the amplitude for a photon entering mode k
/// to leave in mode j, so a creation operator on mode k is replaced by sum_j m(j,k) a_j^dagger.
class ModeMatrix {
public:
    ModeMatrix(std::vector<ModeLabel> modes, Eigen::MatrixXcd entries);

    const std::vector<ModeLabel>& modes() const { return modes_; }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    /// Index of `mode` within modes(), or -1.
    int index_of(const ModeLabel& mode) const;

    bool is_unitary(double tol = 1e-10) const;
    ModeMatrix adjoint() const;

private:
    std::vector<ModeLabel> modes_;
    Eigen::MatrixXcd entries_;
    std::map<ModeLabel, int> index_;
};

/// Threshold detector: clicks when at least one photon lands in any monitored mode.
struct DetectorSpec {
    std::string id;
    std::vector<ModeLabel> monitored;
    double efficiency = 1.0;
    double dark_click_prob = 0.0;

    /// Throws ValidationError on an empty mode set or out-of-range probabilities.
    void validate() const;
    /// Probability of a click with `photons` photons in the monitored modes.
    double click_probability(int photons) const;
};

/// Every mode of `path` across polarizations and temporal bins.
std::vector<ModeLabel> path_modes(const std::string& path);

enum class Click : unsigned char { kNoClick, kClick };
using ClickPattern = std::map<std::string, Click>;

/// Result of post-selecting on a click pattern. Each branch is a normalized state over the
/// unmonitored modes whose weight() is the probability carried by that detected photon-number
/// configuration (scaled by the input weight). Branches never interfere with each other.
struct ConditionResult {
    double probability = 0.0;
    std::vector<StateVector> branches;

    /// The unique branch. Throws if the conditional state is not a single branch.
    const StateVector& conditional() const;
};

struct ReducedPolarization {
    double p_single = 0.0;
    Eigen::Matrix2cd rho;
};

using DensityMatrix2 = Eigen::Matrix2cd;

StateVector make_qubit_photon(const PolarizationQubit& q, const std::string& path, int tbin = 0);
/// (|H>_A|V>_B - |V>_A|H>_B)/sqrt(2).
StateVector make_psi_minus(const std::string& path_a, const std::string& path_b, int tbin = 0);

/// Product state. The occupied spatial paths of the two factors must be disjoint.
StateVector tensor(const StateVector& s1, const StateVector& s2);
Complex inner(const StateVector& s1, const StateVector& s2);

/// a^dagger on `mode`, with the sqrt(n+1) bosonic factor.
StateVector apply_creation(const StateVector& s, const ModeLabel& mode);

/// Evolves `s` through the linear optical element `m`. Throws ValidationError if `m` is not
/// unitary within 1e-10.
StateVector apply_mode_map(const StateVector& s, const ModeMatrix& m);

/// Post-selects `s` on `pattern`. Detectors named in the pattern must be present in
/// `detectors`; detectors absent from the pattern are left unconstrained and unmeasured.
ConditionResult condition_on_pattern(const StateVector& s, const ClickPattern& pattern,
                                     std::span<const DetectorSpec> detectors);

/// Probability of every exclusive click pattern over all `detectors`, keyed by bitmask
/// (bit i set when detectors[i] clicks).
std::map<unsigned, double> click_pattern_distribution(const StateVector& s,
                                                      std::span<const DetectorSpec> detectors);

/// Distribution of photon counts landing in each detector's monitored modes (ignoring
/// efficiency and dark clicks).
std::map<std::vector<int>, double> photon_count_distribution(
    const StateVector& s, std::span<const DetectorSpec> detectors);

/// Polarization state of the single photon on `path`, conditioned on exactly one photon being
/// there, with every other mode and the temporal bin traced out. nullopt when that event has
/// zero probability.
std::optional<ReducedPolarization> reduced_polarization(const StateVector& s,
                                                        const std::string& path);

/// Two-photon polarization state over (path_a, path_b) in the basis HH, HV, VH, VV,
/// conditioned on exactly one photon on each path.
struct ReducedPairPolarization {
    double probability = 0.0;
    Eigen::Matrix4cd rho;
};
std::optional<ReducedPairPolarization> reduced_pair_polarization(const StateVector& s,
                                                                 const std::string& path_a,
                                                                 const std::string& path_b);

bool is_density_matrix(const DensityMatrix2& rho, double tol = 1e-10);

/// <q|rho|q>. Throws ValidationError when rho is not a valid density matrix.
double fidelity(const DensityMatrix2& rho, const PolarizationQubit& q);

}  // namespace telesim

#endif  // TELESIM_FOCK_HPP
