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

#include <random>

#include "telesim/experiments.hpp"

namespace telesim {

double classical_measure_resend(const PolarizationQubit& q, const PolarizationQubit& basis) {
    // Outcome b with probability p resends b (overlap p); outcome b_perp resends b_perp (1 - p).
    const double p = std::norm(basis.amplitudes().dot(q.amplitudes()));
    return p * p + (1.0 - p) * (1.0 - p);
}

double haar_average_fidelity(std::int64_t samples, std::uint64_t seed) {
    if (samples < 1) throw ValidationError("haar average needs at least one sample");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const auto hv = PolarizationQubit::horizontal();
    double sum = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        // Normalized complex Gaussian vectors are uniform on the Bloch sphere.
        const Complex a{normal(rng), normal(rng)};
        const Complex b{normal(rng), normal(rng)};
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        sum += classical_measure_resend(PolarizationQubit(a / n, b / n), hv);
    }
    return sum / static_cast<double>(samples);
}

}  // namespace telesim
