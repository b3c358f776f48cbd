// Copyright 2026 The multicorr Authors
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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace multicorr::cli {

inline constexpr const char *kVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitViolation = 1,
    kExitConfig = 2,
    kExitResource = 3,
    kExitSolver = 4,
};

struct RunConfig {
    std::string command;
    int n = 3;
    double p = 0.5;
    std::optional<double> epsilon;
    std::optional<int> weight;
    std::string state = "rho";
    std::string settings;
    std::string scenario_path;
    std::string pauli;
    int random_observables = 0;
    uint64_t seed = 0;
    int restarts = 20;
    double tol = 1e-5;
    std::string format = "json";
    std::string output;
    std::optional<int> threads;
    bool omit_entries = false;
    std::string grid;
    int polish_candidates = 4;
    int polish_evaluations = 150;
    bool column_generation = false;
};

/// Parses "a:b:step" (inclusive range) or a comma-separated list.
std::vector<double> parse_grid(const std::string &text);

/// Parses "m" or "m1,m2,...,mn" into n per-party setting counts.
std::vector<int> parse_settings(const std::string &text, int n);

/// Runs one invocation; args excludes the program name. Reports go to out
/// (or the --output file), diagnostics and progress to err.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace multicorr::cli
