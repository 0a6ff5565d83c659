// Copyright 2026 The nosig-lab Authors
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

#ifndef NSL_LABCTL_H
#define NSL_LABCTL_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsl/ensemble.h"

namespace nsl {

inline constexpr int kReportSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInvariantViolation = 3;

/// Effective configuration of one labctl invocation, defaults resolved.
struct RunConfig {
    std::string subcommand;
    int n = 6;
    std::int64_t trials = 100000;
    std::uint64_t seed = 0;
    Mode mode = Mode::kExact;
    std::string out;
    std::string format = "json";
    std::string config;
    JamBasis jim = JamBasis::kX;

    nlohmann::json to_json() const;
};

/// Throws std::invalid_argument for a configuration the subcommand rejects.
void validate(const RunConfig &config);

/// Report bodies; each embeds schema_version, the command and its config.
/// "checks" maps named properties to pass/fail; "invariant_violations" lists
/// the deterministic ones that failed (labctl exits with code 3 if any).
nlohmann::json cmd_pr_signal(const RunConfig &config);
nlohmann::json cmd_tsirelson(const RunConfig &config);
nlohmann::json cmd_ghz_signal(const RunConfig &config);
nlohmann::json cmd_ghz_algebra(const RunConfig &config);
nlohmann::json cmd_jamming(const RunConfig &config);
nlohmann::json cmd_causal(const RunConfig &config);

/// Plot-ready CSV for the scenario subcommands.
std::string csv_report(const RunConfig &config);

/// Full command-line entry point. `args` excludes the program name.
int run_labctl(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace nsl

#endif
