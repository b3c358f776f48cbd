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

#include <string>

#include "json.hpp"
#include "multicorr/entanglement.h"
#include "multicorr/lhv.h"
#include "multicorr/pauli.h"
#include "multicorr/qstate.h"
#include "multicorr/settings_search.h"

namespace multicorr::io {

using Json = nlohmann::ordered_json;

/// {n, terms: [{weight, amps: [[re, im], ...]}]}
Json state_to_json(const LowRankState &state);
LowRankState state_from_json(const Json &j);

/// {n, weight, count, max_abs, argmax, entries?: [{string, value}]}
Json correlation_to_json(const CorrelationReport &report, bool include_entries);
/// "string,value" rows after a header line.
std::string correlation_to_csv(const CorrelationReport &report);

/// {n, settings: [[[x, y, z], ...] per party]}
Json scenario_to_json(const Scenario &scenario);
Scenario scenario_from_json(const Json &j);

/// Rows s_1..s_n (1-based), a_1..a_n (+1/-1), p.
std::string behavior_to_csv(const Behavior &b);

/// Certificate coefficients are listed sparsely as {s, a, value}.
Json lp_result_to_json(const LPResult &result, const Scenario &scenario);

Json entanglement_to_json(const EntanglementReport &report);

Json settings_result_to_json(const SettingsResult &result);

Json scan_to_json(const ScanReport &report, double tol);

Json read_json_file(const std::string &path);

}  // namespace multicorr::io
