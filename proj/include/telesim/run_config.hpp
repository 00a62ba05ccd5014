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

#ifndef TELESIM_RUN_CONFIG_HPP
#define TELESIM_RUN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "telesim/fock.hpp"

namespace telesim {

/// Bad configuration value. The message names the key and the violated constraint.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Everything one CLI run needs. Keys of the config file are the field names below; flags are
/// the same names with '-' for '_'.
struct RunConfig {
    /// teleport, swap, baseline-classical, baseline-random or calibrate.
    std::string experiment = "teleport";
    /// exact or mc.
    std::string mode = "exact";
    std::uint64_t trials = 100000;
    std::uint64_t seed = 12345;
    double overlap = 1.0;
    double chi_forward = 0.01;
    double chi_return = 0.01;
    /// Applied to every detector.
    double efficiency = 1.0;
    /// Per-detector dark-click probability, applied to every detector.
    double dark = 0.0;
    /// H, V, plus45, minus45, R or custom.
    std::string setting = "H";
    double bloch_theta = 0.0;
    double bloch_phi = 0.0;
    int theta_steps = 16;
    std::optional<double> calibrate_visibility;
    std::optional<double> calibrate_fidelity;
    std::int64_t samples = 1000000;
    unsigned threads = 1;
    /// Monte Carlo draws only multi-pair emissions.
    bool conditional = true;
    /// Empty means stdout.
    std::string out;
    /// json or csv.
    std::string format = "json";

    bool operator==(const RunConfig&) const = default;
};

/// Keys accepted by apply_setting, in dump order ("chi" sets both chi values).
const std::vector<std::string>& config_keys();

/// Parses `value` into the field named `key`. Throws ConfigError on unknown keys or unparsable
/// values. Range checks are left to validate().
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Applies a flat `key = value` text on top of `cfg`. Blank lines and '#' comments are skipped.
void apply_config_text(RunConfig& cfg, std::string_view text);

/// Inverse of apply_config_text; doubles are written with 17 significant digits.
std::string dump_config(const RunConfig& cfg);

/// Throws ConfigError naming the first violated constraint.
void validate(const RunConfig& cfg);

}  // namespace telesim

#endif  // TELESIM_RUN_CONFIG_HPP
