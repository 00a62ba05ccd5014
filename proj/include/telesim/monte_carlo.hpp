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

#ifndef TELESIM_MONTE_CARLO_HPP
#define TELESIM_MONTE_CARLO_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "telesim/circuit.hpp"

namespace telesim {

/// Counts of exclusive click patterns over all detectors of a circuit.
struct CountTable {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    /// Probability mass of the emission sectors that were sampled (1 unless conditional).
    double restriction_factor = 1.0;
    std::vector<std::string> detector_ids;
    /// Pattern name -> count. Patterns never observed are absent.
    std::map<std::string, std::uint64_t> counts;

    std::uint64_t count(const std::string& pattern) const;
    /// Trials in which every detector in `ids` clicked and none in `absent` did. Detectors in
    /// neither list are unconstrained.
    std::uint64_t count_with(std::span<const std::string> ids,
                             std::span<const std::string> absent = {}) const;
};

/// "p+f1+f2" style name listing the clicked detectors in circuit order, "none" for no clicks.
std::string pattern_name(unsigned mask, std::span<const DetectorSpec> detectors);

/// Samples `trials` pulses: an emission sector by weight, then a photon-count outcome of that
/// sector through the lossless circuit, then each detector's click from its efficiency and dark
/// rate. With `conditional_sampling`, only sectors with at least two pairs are drawn and
/// restriction_factor records their total probability. `threads` = 0 picks the hardware count;
/// the table is identical for any thread count.
CountTable run_monte_carlo(const Circuit& circuit, std::uint64_t trials, std::uint64_t seed,
                           bool conditional_sampling, unsigned threads = 1);

/// Exact probability of every exclusive click pattern, from the lossy circuit and
/// condition_on_pattern. With `conditional`, probabilities are conditioned on at least two pairs,
/// matching what a conditional Monte Carlo run estimates.
std::map<std::string, double> exact_pattern_probabilities(const Circuit& circuit, bool conditional);

}  // namespace telesim

#endif  // TELESIM_MONTE_CARLO_HPP
