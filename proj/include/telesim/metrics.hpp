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

#ifndef TELESIM_METRICS_HPP
#define TELESIM_METRICS_HPP

#include <cmath>
#include <numbers>
#include <span>
#include <utility>

#include "telesim/report.hpp"

namespace telesim {

/// Best fidelity reachable by measuring the input and resending an eigenstate.
inline constexpr double kClassicalFidelityBound = 2.0 / 3.0;
inline constexpr double kClassicalVisibilityBound = 0.5;
/// Visibility above which the two-photon fringe violates a Bell inequality.
inline constexpr double kBellVisibilityThreshold = 1.0 / std::numbers::sqrt2;

struct Assessment {
    double fidelity = 0.0;
    bool beats_classical = false;
    double visibility = 0.0;
    bool beats_classical_visibility = false;
    bool bell_violating = false;
    double crosstalk_rejection = 1.0;
    double efficiency = 0.0;
};

/// Least-squares fit of rate = offset (1 + V cos(2 (theta - phase))). `weights` is either empty
/// (ordinary least squares) or one weight per point. Needs at least 4 points covering at least
/// half a period in theta.
FringeFit fit_fringe(std::span<const std::pair<double, double>> points,
                     std::span<const double> weights = {});

/// Inverse-variance weights for Poisson counts, 1 / max(count, 1).
std::vector<double> poisson_weights(std::span<const std::pair<double, double>> counts);

inline double fringe_rate(const FringeFit& fit, double theta) {
    return fit.offset * (1.0 + fit.visibility * std::cos(2.0 * (theta - fit.phase)));
}

/// Fidelity of a Werner-like state whose fringe visibility is v: (1 + v) / 2.
double fidelity_from_visibility(double v);

double crosstalk_rejection(const CrosstalkStats& stats);

/// Applies the classical fidelity bound, the classical visibility bound and the Bell threshold.
/// Every comparison is strict. Missing fidelity or visibility is reported as NaN with the
/// matching flags false.
Assessment assess(const ExperimentReport& report);

}  // namespace telesim

#endif  // TELESIM_METRICS_HPP
