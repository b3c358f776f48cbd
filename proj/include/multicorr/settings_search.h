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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "multicorr/lhv.h"
#include "multicorr/qstate.h"

namespace multicorr {

struct SearchOptions {
    LPOptions lp;
    /// Rounds of dual-guided direction updates per restart.
    int guided_rounds = 60;
    /// Consecutive non-improving guided rounds tolerated before stopping.
    int guided_patience = 3;
    /// Number of restarts, ranked by their guided result, that receive the
    /// simplex polish.
    int polish_candidates = 4;
    /// Objective evaluations allowed in each simplex polish.
    int polish_evaluations = 150;
    double polish_step = 0.1;
    double polish_size_tol = 1e-6;
    /// Optional starting scenario evaluated in addition to the random restarts.
    std::optional<Scenario> initial;
};

struct RestartOutcome {
    double guided_visibility = 0;
    double final_visibility = 0;
    bool polished = false;
    int lp_solves = 0;
};

struct SettingsResult {
    Scenario scenario;
    LPResult lp;
    int best_restart = -1;  // -1 when the initial scenario won
    std::vector<RestartOutcome> restarts;
    int lp_solves = 0;
};

/// Pauli correlation tensor T[a_1..a_n] = Tr(rho sigma_{a_1} .. sigma_{a_n}),
/// letters ordered I, X, Y, Z, first site slowest.
std::vector<double> pauli_tensor(const LowRankState &state);

/// Generalized correlators E(t), t_k = 0 meaning party k is traced out, for
/// the given scenario, contracted from a Pauli tensor.
std::vector<double> scenario_correlators(std::span<const double> tensor, const Scenario &scenario);

Scenario scenario_from_angles(std::span<const int> settings, std::span<const double> angles);

/// Searches for measurement directions minimizing the critical visibility.
/// Each restart draws seeded random directions, then alternates LP solves
/// with exact per-direction maximization of the current dual functional. The
/// best restarts then receive a Nelder-Mead polish over spherical angles.
SettingsResult optimize_settings(
    const LowRankState &state,
    std::span<const int> settings,
    int restarts,
    uint64_t seed,
    const SearchOptions &options = {});

struct ScanPoint {
    double epsilon = 0;
    double visibility = 0;
    bool violation = false;
    SettingsResult search;
};

struct ScanReport {
    int n = 0;
    std::vector<int> settings;
    std::vector<ScanPoint> points;
    std::optional<double> threshold;
    bool non_monotone = false;
};

/// True when, sorted by epsilon, some visibility exceeds its predecessor by
/// more than tol.
bool visibility_non_monotone(std::span<const ScanPoint> points, double tol);

/// Runs optimize_settings on (1/2 + eps)|W><W| + (1/2 - eps)|Wbar><Wbar| for
/// every grid value. Each point after the first also starts from the best
/// scenario of the previous point.
ScanReport epsilon_scan(
    int n,
    std::span<const int> settings,
    std::span<const double> grid,
    int restarts,
    uint64_t seed,
    const SearchOptions &options = {},
    const std::function<void(const ScanPoint &)> &progress = {});

}  // namespace multicorr
