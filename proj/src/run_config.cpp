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

#include "telesim/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace telesim {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view what) {
    throw ConfigError(std::string(key) + ": cannot parse '" + std::string(value) + "' as " +
                      std::string(what));
}

double parse_double(std::string_view key, std::string_view value) {
    const std::string v(value);
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d)) bad_value(key, value, "a number");
    return d;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, value, "true or false");
}

std::string fmt(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "experiment", "mode",        "trials",     "seed",        "overlap",
        "chi_forward", "chi_return", "efficiency", "dark",        "setting",
        "bloch_theta", "bloch_phi",  "theta_steps", "calibrate_visibility",
        "calibrate_fidelity", "samples", "threads", "conditional", "out", "format"};
    return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view raw) {
    const std::string value = trim(raw);
    if (key == "experiment") cfg.experiment = value;
    else if (key == "mode") cfg.mode = value == "montecarlo" ? "mc" : value;
    else if (key == "trials") cfg.trials = parse_int<std::uint64_t>(key, value);
    else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(key, value);
    else if (key == "overlap") cfg.overlap = parse_double(key, value);
    else if (key == "chi") cfg.chi_forward = cfg.chi_return = parse_double(key, value);
    else if (key == "chi_forward") cfg.chi_forward = parse_double(key, value);
    else if (key == "chi_return") cfg.chi_return = parse_double(key, value);
    else if (key == "efficiency") cfg.efficiency = parse_double(key, value);
    else if (key == "dark") cfg.dark = parse_double(key, value);
    else if (key == "setting") cfg.setting = value;
    else if (key == "bloch_theta") cfg.bloch_theta = parse_double(key, value);
    else if (key == "bloch_phi") cfg.bloch_phi = parse_double(key, value);
    else if (key == "theta_steps") cfg.theta_steps = parse_int<int>(key, value);
    else if (key == "calibrate_visibility") cfg.calibrate_visibility = parse_double(key, value);
    else if (key == "calibrate_fidelity") cfg.calibrate_fidelity = parse_double(key, value);
    else if (key == "samples") cfg.samples = parse_int<std::int64_t>(key, value);
    else if (key == "threads") cfg.threads = parse_int<unsigned>(key, value);
    else if (key == "conditional") cfg.conditional = parse_bool(key, value);
    else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = value;
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
    std::istringstream in{std::string(text)};
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        apply_setting(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
    }
}

std::string dump_config(const RunConfig& cfg) {
    std::ostringstream o;
    o << "experiment = " << cfg.experiment << '\n'
      << "mode = " << cfg.mode << '\n'
      << "trials = " << cfg.trials << '\n'
      << "seed = " << cfg.seed << '\n'
      << "overlap = " << fmt(cfg.overlap) << '\n'
      << "chi_forward = " << fmt(cfg.chi_forward) << '\n'
      << "chi_return = " << fmt(cfg.chi_return) << '\n'
      << "efficiency = " << fmt(cfg.efficiency) << '\n'
      << "dark = " << fmt(cfg.dark) << '\n'
      << "setting = " << cfg.setting << '\n'
      << "bloch_theta = " << fmt(cfg.bloch_theta) << '\n'
      << "bloch_phi = " << fmt(cfg.bloch_phi) << '\n'
      << "theta_steps = " << cfg.theta_steps << '\n';
    if (cfg.calibrate_visibility) o << "calibrate_visibility = " << fmt(*cfg.calibrate_visibility) << '\n';
    if (cfg.calibrate_fidelity) o << "calibrate_fidelity = " << fmt(*cfg.calibrate_fidelity) << '\n';
    o << "samples = " << cfg.samples << '\n'
      << "threads = " << cfg.threads << '\n'
      << "conditional = " << (cfg.conditional ? "true" : "false") << '\n';
    if (!cfg.out.empty()) o << "out = " << cfg.out << '\n';
    o << "format = " << cfg.format << '\n';
    return o.str();
}

void validate(const RunConfig& cfg) {
    static const std::vector<std::string> experiments{"teleport", "swap", "baseline-classical",
                                                      "baseline-random", "calibrate"};
    static const std::vector<std::string> settings{"H", "V", "plus45", "minus45", "R", "custom"};
    auto one_of = [](const std::vector<std::string>& v, const std::string& x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };

    require(one_of(experiments, cfg.experiment), "experiment must be one of teleport, swap, "
                                                 "baseline-classical, baseline-random, calibrate");
    require(cfg.mode == "exact" || cfg.mode == "mc", "mode must be exact or mc");
    require(in_unit(cfg.overlap), "overlap must lie in [0, 1]");
    require(cfg.chi_forward >= 0.0 && cfg.chi_forward <= 0.2, "chi_forward must lie in [0, 0.2]");
    require(cfg.chi_return >= 0.0 && cfg.chi_return <= 0.2, "chi_return must lie in [0, 0.2]");
    require(in_unit(cfg.efficiency), "efficiency must lie in [0, 1]");
    require(cfg.dark >= 0.0 && cfg.dark < 1.0, "dark must lie in [0, 1)");
    require(one_of(settings, cfg.setting), "setting must be one of H, V, plus45, minus45, R, custom");
    require(cfg.bloch_theta >= 0.0 && cfg.bloch_theta <= std::numbers::pi,
            "bloch_theta must lie in [0, pi]");
    require(cfg.theta_steps >= 4 && cfg.theta_steps <= 4096, "theta_steps must lie in [4, 4096]");
    require(cfg.samples >= 1, "samples must be at least 1");
    require(cfg.threads <= 1024, "threads must be at most 1024");
    require(cfg.format == "json" || cfg.format == "csv", "format must be json or csv");
    require(cfg.trials <= 10'000'000'000ULL, "trials must be at most 1e10");

    if (cfg.calibrate_visibility) {
        require(*cfg.calibrate_visibility > 0.0 && *cfg.calibrate_visibility <= 1.0,
                "calibrate_visibility must lie in (0, 1]");
    }
    if (cfg.calibrate_fidelity) {
        require(*cfg.calibrate_fidelity > 0.5 && *cfg.calibrate_fidelity <= 1.0,
                "calibrate_fidelity must lie in (0.5, 1]");
    }

    const auto& e = cfg.experiment;
    require(!(cfg.calibrate_visibility && cfg.calibrate_fidelity),
            "calibrate_visibility and calibrate_fidelity are mutually exclusive");
    if (e == "calibrate") {
        require(cfg.calibrate_visibility || cfg.calibrate_fidelity,
                "calibrate needs calibrate_visibility or calibrate_fidelity");
    }
    if (e == "teleport") require(!cfg.calibrate_visibility, "teleport takes calibrate_fidelity, not calibrate_visibility");
    if (e == "swap") require(!cfg.calibrate_fidelity, "swap takes calibrate_visibility, not calibrate_fidelity");
    if (e == "baseline-classical" || e == "baseline-random") {
        require(!cfg.calibrate_visibility && !cfg.calibrate_fidelity, "baselines take no calibration target");
    }
    if (e == "baseline-random") require(cfg.mode == "exact", "baseline-random supports mode exact only");
    if (cfg.format == "csv") {
        const bool fringe = e == "swap" || e == "baseline-random" ||
                            (e == "calibrate" && cfg.calibrate_visibility);
        require(fringe, "format csv needs a fringe table (swap, baseline-random or a visibility calibration)");
    }
}

}  // namespace telesim
