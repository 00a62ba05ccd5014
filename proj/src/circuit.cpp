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

#include "telesim/circuit.hpp"

#include <algorithm>

namespace telesim {

const DetectorSpec& Circuit::detector(const std::string& id) const {
    for (const auto& d : detectors) {
        if (d.id == id) return d;
    }
    throw ValidationError("circuit " + name + " has no detector " + id);
}

std::size_t Circuit::count(ElementKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        elements.begin(), elements.end(), [kind](const Element& e) { return e.kind == kind; }));
}

std::set<std::string> Circuit::paths() const {
    std::set<std::string> out{source.forward_paths.first, source.forward_paths.second,
                              source.return_paths.first, source.return_paths.second};
    for (const auto& e : elements) {
        for (const auto& m : e.map.modes()) out.insert(m.path);
    }
    for (const auto& d : detectors) {
        for (const auto& m : d.monitored) out.insert(m.path);
    }
    return out;
}

std::vector<DetectorSpec> Circuit::detectors_after_loss() const {
    auto out = detectors;
    for (auto& d : out) d.efficiency = 1.0;
    return out;
}

StateVector propagate(const StateVector& s, const Circuit& circuit,
                      std::initializer_list<Stage> stages) {
    StateVector out = s;
    for (const auto& e : circuit.elements) {
        if (std::find(stages.begin(), stages.end(), e.stage) != stages.end()) {
            out = apply_mode_map(out, e.map);
        }
    }
    return out;
}

StateVector propagate(const StateVector& s, const Circuit& circuit) {
    StateVector out = s;
    for (const auto& e : circuit.elements) out = apply_mode_map(out, e.map);
    return out;
}

}  // namespace telesim
