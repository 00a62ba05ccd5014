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

#include "telesim/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace telesim {

namespace fs = std::filesystem;

double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

nlohmann::json opt(const std::optional<double>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

nlohmann::json matrix_json(const DensityMatrix2& m) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (int i = 0; i < 2; ++i) {
        re.push_back({m(i, 0).real(), m(i, 1).real()});
        im.push_back({m(i, 0).imag(), m(i, 1).imag()});
    }
    return {{"real", re}, {"imag", im}};
}

nlohmann::json fit_json(const std::optional<FringeFit>& f) {
    if (!f) return nullptr;
    return {{"visibility", f->visibility},
            {"phase", f->phase_defined ? nlohmann::json(f->phase) : nlohmann::json(nullptr)},
            {"offset", f->offset},
            {"residual", f->residual}};
}

nlohmann::json rounded(const nlohmann::json& j) {
    if (j.is_number_float()) {
        const double d = j.get<double>();
        return std::isfinite(d) ? nlohmann::json(round12(d)) : nlohmann::json(nullptr);
    }
    if (j.is_object()) {
        nlohmann::json out = nlohmann::json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = rounded(it.value());
        return out;
    }
    if (j.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& v : j) out.push_back(rounded(v));
        return out;
    }
    return j;
}

}  // namespace

nlohmann::json report_json(const ExperimentReport& r, const Assessment& a) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["overlap_v"] = r.overlap_v;
    j["fidelity"] = opt(r.fidelity);
    j["visibility"] = opt(r.visibility);
    j["efficiency"] = r.efficiency;
    j["crosstalk_rejection"] = a.crosstalk_rejection;
    j["beats_classical"] = a.beats_classical;
    j["bell_violating"] = a.bell_violating;
    j["threefold_prob"] = r.threefold_prob;
    j["fourfold_probs"] = r.fourfold_probs;
    j["fourfold_fidelity"] = opt(r.fourfold_fidelity);
    j["singlet_fraction"] = opt(r.singlet_fraction);
    j["no_bob_photon_fraction"] = r.no_bob_photon_fraction;
    j["crosstalk"] = {{"spurious_threefold_prob", r.crosstalk.spurious_threefold_prob},
                      {"spurious_with_bob_click_prob", r.crosstalk.spurious_with_bob_click_prob}};
    if (r.bob_conditional) j["bob_density_matrix"] = matrix_json(*r.bob_conditional);
    if (!r.fringe_points.empty()) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : r.fringe_points) {
            pts.push_back({{"theta", p.theta}, {"rate_plus", p.rate_plus}, {"rate_minus", p.rate_minus}});
        }
        j["fringe_points"] = pts;
        j["fit_plus"] = fit_json(r.fit_plus);
        j["fit_minus"] = fit_json(r.fit_minus);
    }
    return j;
}

nlohmann::json count_table_json(const CountTable& t) {
    return {{"trials", t.trials},
            {"restriction_factor", t.restriction_factor},
            {"detectors", t.detector_ids},
            {"counts", t.counts}};
}

std::string dump_json(const nlohmann::json& j) { return rounded(j).dump(2) + "\n"; }

std::string fringe_csv(std::span<const FringePoint> points) {
    std::ostringstream o;
    o << "theta,rate_plus,rate_minus\n";
    for (const auto& p : points) {
        o << format_number(p.theta) << ',' << format_number(p.rate_plus) << ','
          << format_number(p.rate_minus) << '\n';
    }
    return o.str();
}

void check_writable(const std::string& path) {
    const fs::path p(path);
    const fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw OutputError("output directory does not exist: " + dir.string());
    if (fs::is_directory(p, ec)) throw OutputError("output path is a directory: " + path);
    const fs::path probe = p.string() + ".tmp";
    {
        std::ofstream f(probe, std::ios::binary);
        if (!f) throw OutputError("cannot write " + path);
    }
    fs::remove(probe, ec);
}

void write_atomic(const std::string& path, std::string_view contents) {
    const fs::path tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw OutputError("cannot write " + path);
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw OutputError("short write to " + path);
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw OutputError("cannot rename onto " + path);
    }
}

}  // namespace telesim
