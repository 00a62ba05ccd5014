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

#ifndef TELESIM_REPORT_IO_HPP
#define TELESIM_REPORT_IO_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "telesim/metrics.hpp"
#include "telesim/monte_carlo.hpp"
#include "telesim/report.hpp"

namespace telesim {

/// Output file could not be written.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rounds to 12 significant digits.
double round12(double x);

/// "%.12g".
std::string format_number(double x);

/// Report keys shared by every experiment. Undefined values are null.
nlohmann::json report_json(const ExperimentReport& report, const Assessment& assessment);

nlohmann::json count_table_json(const CountTable& table);

/// Serializes with every floating-point number rounded to 12 significant digits and
/// non-finite values as null. Object keys come out sorted, so output is byte-stable.
std::string dump_json(const nlohmann::json& j);

/// `theta,rate_plus,rate_minus` table, one row per point.
std::string fringe_csv(std::span<const FringePoint> points);

/// Fails early with OutputError when `path` cannot be created.
void check_writable(const std::string& path);

/// Writes to a sibling temporary file, then renames over `path`. A failed run leaves no
/// partial file behind.
void write_atomic(const std::string& path, std::string_view contents);

}  // namespace telesim

#endif  // TELESIM_REPORT_IO_HPP
