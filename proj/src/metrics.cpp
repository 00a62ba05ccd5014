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

#include "telesim/metrics.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Dense>

namespace telesim {

FringeFit fit_fringe(std::span<const std::pair<double, double>> points,
                     std::span<const double> weights) {
    if (points.size() < 4) throw ValidationError("fringe fit needs at least 4 points");
    if (!weights.empty() && weights.size() != points.size()) {
        throw ValidationError("fringe fit needs one weight per point");
    }
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                        [](const auto& a, const auto& b) { return a.first < b.first; });
    if (hi->first - lo->first < std::numbers::pi / 2 - 1e-12) {
        throw ValidationError("fringe fit needs points spanning at least half a period");
    }

    auto [rmin, rmax] = std::minmax_element(points.begin(), points.end(),
                                            [](const auto& a, const auto& b) { return a.second < b.second; });
    const auto n = static_cast<Eigen::Index>(points.size());
    if (rmax->second - rmin->second <= 1e-12 * std::max(std::abs(rmax->second), 1e-300)) {
        double mean = 0.0;
        for (const auto& p : points) mean += p.second;
        return {0.0, 0.0, mean / static_cast<double>(n), 0.0, false};
    }

    // Linear in (offset, b, c) for rate = offset + b cos(2 theta) + c sin(2 theta).
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : std::sqrt(weights[i]);
        const double th = points[i].first;
        design.row(i) << w, w * std::cos(2 * th), w * std::sin(2 * th);
        rhs(i) = w * points[i].second;
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);

    FringeFit fit;
    fit.offset = coef(0);
    if (fit.offset <= 0.0) throw ValidationError("fringe fit produced a nonpositive offset");
    fit.visibility = std::hypot(coef(1), coef(2)) / fit.offset;
    fit.phase = 0.5 * std::atan2(coef(2), coef(1));
    if (fit.phase < 0.0) fit.phase += std::numbers::pi;

    double ss = 0.0;
    for (const auto& [th, rate] : points) {
        const double d = fringe_rate(fit, th) - rate;
        ss += d * d;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

std::vector<double> poisson_weights(std::span<const std::pair<double, double>> counts) {
    std::vector<double> w;
    w.reserve(counts.size());
    for (const auto& c : counts) w.push_back(1.0 / std::max(c.second, 1.0));
    return w;
}

double fidelity_from_visibility(double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("visibility must lie in [0, 1], got " + std::to_string(v));
    }
    return (1.0 + v) / 2.0;
}

double crosstalk_rejection(const CrosstalkStats& stats) {
    return stats.rejection();
}

Assessment assess(const ExperimentReport& report) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    Assessment a;
    a.fidelity = report.fidelity.value_or(nan);
    a.visibility = report.visibility.value_or(nan);
    // NaN compares false, so undefined quantities never pass a bound.
    a.beats_classical = a.fidelity > kClassicalFidelityBound;
    a.beats_classical_visibility = a.visibility > kClassicalVisibilityBound;
    a.bell_violating = a.visibility > kBellVisibilityThreshold;
    a.crosstalk_rejection = crosstalk_rejection(report.crosstalk);
    a.efficiency = report.efficiency;
    return a;
}

}  // namespace telesim
