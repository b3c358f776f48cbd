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

#include "multicorr/io.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "multicorr/error.h"

namespace multicorr::io {

namespace {

std::vector<int> one_based(const std::vector<int> &digits) {
    std::vector<int> out;
    for (int d : digits) {
        out.push_back(d + 1);
    }
    return out;
}

std::vector<int> outcome_signs(uint64_t a, int n) {
    std::vector<int> out;
    for (int k = 0; k < n; k++) {
        out.push_back(((a >> (n - 1 - k)) & 1) ? -1 : 1);
    }
    return out;
}

const Json &require(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        fail(ErrorKind::ParseError, std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

double number(const Json &j, const char *what) {
    if (!j.is_number()) {
        fail(ErrorKind::ParseError, std::string(what) + " must be a number");
    }
    return j.get<double>();
}

}  // namespace

Json state_to_json(const LowRankState &state) {
    Json terms = Json::array();
    for (const auto &term : state.terms()) {
        Json amps = Json::array();
        for (const auto &a : term.vector.amplitudes()) {
            amps.push_back({a.real(), a.imag()});
        }
        terms.push_back({{"weight", term.weight}, {"amps", std::move(amps)}});
    }
    return {{"n", state.num_qubits()}, {"terms", std::move(terms)}};
}

LowRankState state_from_json(const Json &j) {
    const Json &n_field = require(j, "n");
    if (!n_field.is_number_integer()) {
        fail(ErrorKind::ParseError, "n must be an integer");
    }
    int n = n_field.get<int>();
    if (n < 1 || n > kQubitCap) {
        fail(ErrorKind::InvalidDimension, "n outside [1, " + std::to_string(kQubitCap) + "]");
    }
    const Json &terms = require(j, "terms");
    if (!terms.is_array() || terms.empty()) {
        fail(ErrorKind::ParseError, "terms must be a nonempty array");
    }
    std::vector<WeightedState> parsed;
    for (const auto &term : terms) {
        double weight = number(require(term, "weight"), "weight");
        const Json &amps = require(term, "amps");
        if (!amps.is_array()) {
            fail(ErrorKind::ParseError, "amps must be an array");
        }
        Amplitudes values;
        for (const auto &a : amps) {
            if (!a.is_array() || a.size() != 2) {
                fail(ErrorKind::ParseError, "each amplitude must be [re, im]");
            }
            values.emplace_back(number(a[0], "re"), number(a[1], "im"));
        }
        parsed.push_back({weight, StateVector::from_amplitudes(n, std::move(values))});
    }
    return LowRankState::from_terms(std::move(parsed));
}

Json correlation_to_json(const CorrelationReport &report, bool include_entries) {
    Json j{
        {"n", report.n},
        {"weight", report.weight},
        {"count", report.count},
        {"max_abs", report.max_abs},
        {"argmax", report.argmax.str()}};
    if (include_entries) {
        Json entries = Json::array();
        for (const auto &e : report.entries) {
            entries.push_back({{"string", e.string.str()}, {"value", e.value}});
        }
        j["entries"] = std::move(entries);
    }
    return j;
}

std::string correlation_to_csv(const CorrelationReport &report) {
    std::ostringstream out;
    out.precision(17);
    out << "string,value\n";
    for (const auto &e : report.entries) {
        out << e.string.str() << ',' << e.value << '\n';
    }
    return out.str();
}

Json scenario_to_json(const Scenario &scenario) {
    Json settings = Json::array();
    for (const auto &party : scenario.settings()) {
        Json dirs = Json::array();
        for (const auto &d : party) {
            dirs.push_back({d[0], d[1], d[2]});
        }
        settings.push_back(std::move(dirs));
    }
    return {{"n", scenario.num_parties()}, {"settings", std::move(settings)}};
}

Scenario scenario_from_json(const Json &j) {
    const Json &settings = require(j, "settings");
    if (!settings.is_array()) {
        fail(ErrorKind::ParseError, "settings must be an array of parties");
    }
    std::vector<std::vector<Bloch>> parsed;
    for (const auto &party : settings) {
        if (!party.is_array()) {
            fail(ErrorKind::ParseError, "each party must list its directions");
        }
        parsed.emplace_back();
        for (const auto &d : party) {
            if (!d.is_array() || d.size() != 3) {
                fail(ErrorKind::ParseError, "each direction must be [x, y, z]");
            }
            parsed.back().push_back({number(d[0], "x"), number(d[1], "y"), number(d[2], "z")});
        }
    }
    if (j.contains("n")) {
        const Json &n = j.at("n");
        if (!n.is_number_integer() || n.get<int64_t>() != static_cast<int64_t>(parsed.size())) {
            fail(ErrorKind::DimensionMismatch, "n does not match the number of parties");
        }
    }
    return Scenario::make(std::move(parsed));
}

std::string behavior_to_csv(const Behavior &b) {
    int n = b.scenario.num_parties();
    std::ostringstream out;
    out.precision(17);
    for (int k = 1; k <= n; k++) {
        out << 's' << k << ',';
    }
    for (int k = 1; k <= n; k++) {
        out << 'a' << k << ',';
    }
    out << "p\n";
    for (uint64_t s = 0; s < b.scenario.num_setting_tuples(); s++) {
        auto digits = b.scenario.setting_digits(s);
        for (uint64_t a = 0; a < b.num_outcomes(); a++) {
            for (int d : digits) {
                out << d + 1 << ',';
            }
            for (int sign : outcome_signs(a, n)) {
                out << sign << ',';
            }
            out << b.probability(s, a) << '\n';
        }
    }
    return out.str();
}

Json lp_result_to_json(const LPResult &result, const Scenario &scenario) {
    Json j{
        {"visibility", result.visibility},
        {"feasible_at_one", result.feasible_at_one},
        {"solver",
         {{"status", std::string(lp::status_name(result.status))},
          {"iterations", result.iterations},
          {"pricing_exact", result.pricing_exact},
          {"warm_started", result.warm_started}}}};
    Json weights = Json::array();
    for (const auto &[lambda, q] : result.strategy_weights) {
        weights.push_back({{"strategy", lambda}, {"weight", q}});
    }
    j["strategy_weights"] = std::move(weights);
    if (result.certificate) {
        const auto &cert = *result.certificate;
        int n = scenario.num_parties();
        uint64_t outcomes = uint64_t{1} << n;
        Json coefficients = Json::array();
        for (size_t i = 0; i < cert.coefficients.size(); i++) {
            double value = cert.coefficients[i];
            if (std::abs(value) < 1e-12) {
                continue;
            }
            uint64_t s = i / outcomes;
            uint64_t a = i % outcomes;
            coefficients.push_back(
                {{"s", one_based(scenario.setting_digits(s))}, {"a", outcome_signs(a, n)}, {"value", value}});
        }
        j["certificate"] = {
            {"coefficients", std::move(coefficients)},
            {"lhv_bound", cert.lhv_bound},
            {"quantum_value", cert.quantum_value}};
    } else {
        j["certificate"] = nullptr;
    }
    return j;
}

Json entanglement_to_json(const EntanglementReport &report) {
    Json cuts = Json::array();
    for (const auto &c : report.cuts) {
        Json cut{
            {"cut", c.cut.str()},
            {"negativity", c.negativity ? Json(*c.negativity) : Json(nullptr)},
            {"weight_argument", c.weight_argument ? Json(*c.weight_argument) : Json(nullptr)},
            {"best_overlap", c.seesaw.best_overlap},
            {"restarts", c.seesaw.restarts},
            {"iterations_used", c.seesaw.iterations_used},
            {"converged", c.seesaw.converged},
            {"monotone", c.seesaw.monotone}};
        cuts.push_back(std::move(cut));
    }
    return {
        {"n", report.n},
        {"p", report.p},
        {"negativity_threshold", report.negativity_threshold},
        {"overlap_margin", report.overlap_margin},
        {"negativity_available", report.negativity_available},
        {"genuine", report.genuine},
        {"cuts", std::move(cuts)}};
}

Json settings_result_to_json(const SettingsResult &result) {
    Json restarts = Json::array();
    for (const auto &r : result.restarts) {
        restarts.push_back(
            {{"guided_visibility", r.guided_visibility},
             {"final_visibility", r.final_visibility},
             {"polished", r.polished},
             {"lp_solves", r.lp_solves}});
    }
    return {
        {"scenario", scenario_to_json(result.scenario)},
        {"lp", lp_result_to_json(result.lp, result.scenario)},
        {"best_restart", result.best_restart},
        {"lp_solves", result.lp_solves},
        {"restarts", std::move(restarts)}};
}

Json scan_to_json(const ScanReport &report, double tol) {
    Json points = Json::array();
    for (const auto &p : report.points) {
        points.push_back(
            {{"epsilon", p.epsilon},
             {"visibility", p.visibility},
             {"violation", p.violation},
             {"scenario", scenario_to_json(p.search.scenario)},
             {"certificate_lhv_bound",
              p.search.lp.certificate ? Json(p.search.lp.certificate->lhv_bound) : Json(nullptr)},
             {"certificate_quantum_value",
              p.search.lp.certificate ? Json(p.search.lp.certificate->quantum_value) : Json(nullptr)}});
    }
    return {
        {"n", report.n},
        {"settings", report.settings},
        {"tol", tol},
        {"threshold", report.threshold ? Json(*report.threshold) : Json(nullptr)},
        {"non_monotone", report.non_monotone},
        {"points", std::move(points)}};
}

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::ParseError, "cannot open " + path);
    }
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        fail(ErrorKind::ParseError, "malformed JSON in " + path);
    }
    return j;
}

}  // namespace multicorr::io
