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

#ifndef TELESIM_CIRCUIT_HPP
#define TELESIM_CIRCUIT_HPP

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "telesim/fock.hpp"
#include "telesim/optics.hpp"

namespace telesim {

enum class ElementKind {
    kBeamsplitter,
    kPolarizer,
    kHalfWavePlate,
    kQuarterWavePlate,
    kPolarizationRotation,
    kPolarizingBeamsplitter,
    kLoss,
};

/// Where an element sits in the setup. Elements of different stages act on disjoint paths
/// except kDetectorLoss, which is polarization-independent and commutes with everything
/// upstream on its path.
enum class Stage {
    kPreparation,
    kBellAnalyzer,
    kBobAnalysis,
    kReferenceAnalysis,
    kDetectorLoss,
};

struct Element {
    ElementKind kind;
    Stage stage;
    std::string label;
    ModeMatrix map;
};

struct Circuit {
    std::string name;
    SourceConfig source;
    std::vector<Element> elements;
    std::vector<DetectorSpec> detectors;

    const DetectorSpec& detector(const std::string& id) const;
    std::size_t count(ElementKind kind) const;
    /// Every spatial path touched by the source, an element or a detector.
    std::set<std::string> paths() const;
    /// The detectors with efficiency 1: the exact engine routes inefficiency through the
    /// kDetectorLoss elements instead.
    std::vector<DetectorSpec> detectors_after_loss() const;
};

/// Applies, in circuit order, every element whose stage is in `stages`.
StateVector propagate(const StateVector& s, const Circuit& circuit,
                      std::initializer_list<Stage> stages);
/// Applies every element.
StateVector propagate(const StateVector& s, const Circuit& circuit);

}  // namespace telesim

#endif  // TELESIM_CIRCUIT_HPP
