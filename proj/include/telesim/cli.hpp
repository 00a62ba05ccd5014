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

#ifndef TELESIM_CLI_HPP
#define TELESIM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "telesim/run_config.hpp"

namespace telesim {

/// Process exit codes. Stable; scripts may rely on them.
enum ExitCode : int {
    kExitOk = 0,
    kExitRuntime = 1,
    kExitUsage = 2,
    kExitConfig = 3,
    kExitOutput = 4,
};

/// Runs one command line. `args` excludes the program name. Reports go to --out (or `out`),
/// diagnostics to `err`.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The text a run would emit (JSON or CSV) for an already validated config.
std::string run_to_text(const RunConfig& cfg);

}  // namespace telesim

#endif  // TELESIM_CLI_HPP
