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

#include "multicorr/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "multicorr/entanglement.h"
#include "multicorr/error.h"
#include "multicorr/io.h"
#include "multicorr/lhv.h"
#include "multicorr/parallel.h"
#include "multicorr/pauli.h"
#include "multicorr/qstate.h"
#include "multicorr/settings_search.h"

namespace multicorr::cli {

namespace {

using io::Json;

constexpr double kVanishingThreshold = 1e-12;

struct Outcome {
    int code = kExitOk;
    Json result;
    std::string csv;
    std::string verdict;
};

double parse_number(const std::string &text) {
    size_t used = 0;
    double value = 0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception &) {
        fail(ErrorKind::ParseError, "not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(value)) {
        fail(ErrorKind::ParseError, "not a number: '" + text + "'");
    }
    return value;
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    std::istringstream in(text);
    while (std::getline(in, current, sep)) {
        parts.push_back(current);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

Json config_json(const RunConfig &c) {
    Json j{
        {"command", c.command},
        {"n", c.n},
        {"p", c.p},
        {"epsilon", c.epsilon ? Json(*c.epsilon) : Json(nullptr)},
        {"weight", c.weight ? Json(*c.weight) : Json(nullptr)},
        {"state", c.state},
        {"settings", c.settings},
        {"scenario", c.scenario_path},
        {"pauli", c.pauli},
        {"random_observables", c.random_observables},
        {"seed", c.seed},
        {"restarts", c.restarts},
        {"tol", c.tol},
        {"format", c.format},
        {"omit_entries", c.omit_entries},
        {"grid", c.grid},
        {"polish_candidates", c.polish_candidates},
        {"polish_evaluations", c.polish_evaluations},
        {"column_generation", c.column_generation}};
    return j;
}

void validate(const RunConfig &c) {
    if (c.n < 1) {
        fail(ErrorKind::InvalidDimension, "--n must be at least 1");
    }
    if (c.n > kQubitCap) {
        fail(ErrorKind::DenseLimitExceeded, "--n exceeds the qubit cap of " + std::to_string(kQubitCap));
    }
    if (!(c.p >= 0 && c.p <= 1)) {
        fail(ErrorKind::InvalidProbability, "--p must lie in [0, 1]");
    }
    if (c.epsilon && !(*c.epsilon >= 0 && *c.epsilon <= 0.5)) {
        fail(ErrorKind::InvalidProbability, "--epsilon must lie in [0, 0.5]");
    }
    if (c.weight && (*c.weight < 0 || *c.weight > c.n)) {
        fail(ErrorKind::InvalidArgument, "--weight must lie in [0, n]");
    }
    if (c.state != "rho" && c.state != "w" && c.state != "ghz") {
        fail(ErrorKind::InvalidArgument, "--state must be rho, w or ghz");
    }
    if (c.restarts < 1) {
        fail(ErrorKind::InvalidArgument, "--restarts must be at least 1");
    }
    if (!(c.tol > 0 && c.tol < 1)) {
        fail(ErrorKind::InvalidArgument, "--tol must lie in (0, 1)");
    }
    if (c.format != "json" && c.format != "csv") {
        fail(ErrorKind::InvalidArgument, "--format must be json or csv");
    }
    if (c.threads && *c.threads < 1) {
        fail(ErrorKind::InvalidArgument, "--threads must be at least 1");
    }
    if (c.random_observables < 0) {
        fail(ErrorKind::InvalidArgument, "--random must be nonnegative");
    }
    if (c.polish_candidates < 0 || c.polish_evaluations < 0) {
        fail(ErrorKind::InvalidArgument, "polish budgets must be nonnegative");
    }
}

double effective_p(const RunConfig &c) {
    return c.epsilon ? 0.5 + *c.epsilon : c.p;
}

LowRankState build_state(const RunConfig &c) {
    if (c.state == "w") {
        return LowRankState::pure(make_w(c.n));
    }
    if (c.state == "ghz") {
        return LowRankState::pure(make_ghz(c.n));
    }
    return make_rho(c.n, effective_p(c));
}

Outcome cmd_correlators(const RunConfig &c) {
    int weight = c.weight.value_or(c.n);
    ScanOptions options;
    options.keep_entries = !c.omit_entries || c.format == "csv";
    auto report = correlation_tensor(build_state(c), weight, options);
    Outcome o;
    o.verdict = report.max_abs <= kVanishingThreshold ? "VANISHING" : "PRESENT";
    o.result = io::correlation_to_json(report, !c.omit_entries);
    o.csv = io::correlation_to_csv(report);
    return o;
}

Outcome cmd_covariance(const RunConfig &c) {
    auto state = build_state(c);
    std::vector<std::vector<LocalObservable>> sets;
    std::vector<std::string> labels;
    if (!c.pauli.empty()) {
        auto pauli = PauliString::parse(c.pauli);
        if (pauli.size() != c.n) {
            fail(ErrorKind::DimensionMismatch, "--pauli needs one letter per qubit");
        }
        std::vector<LocalObservable> obs;
        for (int k = 0; k < c.n; k++) {
            if (pauli[k] != Pauli::I) {
                obs.push_back({k, pauli_matrix(pauli[k])});
            }
        }
        if (obs.empty()) {
            fail(ErrorKind::InvalidArgument, "--pauli must contain a non-identity letter");
        }
        sets.push_back(std::move(obs));
        labels.push_back(pauli.str());
    }
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> g;
    for (int i = 0; i < c.random_observables; i++) {
        std::vector<LocalObservable> obs;
        for (int k = 0; k < c.n; k++) {
            Matrix2 m;
            double a = g(rng), x = g(rng), y = g(rng), z = g(rng);
            m << Complex(a + z, 0), Complex(x, -y), Complex(x, y), Complex(a - z, 0);
            obs.push_back({k, m});
        }
        sets.push_back(std::move(obs));
        labels.push_back("random#" + std::to_string(i));
    }
    if (sets.empty()) {
        fail(ErrorKind::InvalidArgument, "covariance needs --pauli or --random");
    }
    Outcome o;
    Json values = Json::array();
    double max_abs = 0;
    std::ostringstream csv;
    csv.precision(17);
    csv << "observables,covariance\n";
    for (size_t i = 0; i < sets.size(); i++) {
        double v = covariance(state, sets[i]);
        max_abs = std::max(max_abs, std::abs(v));
        values.push_back({{"observables", labels[i]}, {"covariance", v}});
        csv << labels[i] << ',' << v << '\n';
    }
    o.verdict = max_abs <= 1e-10 ? "VANISHING" : "PRESENT";
    o.result = {{"n", c.n}, {"max_abs", max_abs}, {"values", std::move(values)}};
    o.csv = csv.str();
    return o;
}

Outcome cmd_entanglement(const RunConfig &c) {
    SeesawOptions options;
    options.restarts = c.restarts;
    options.seed = c.seed;
    auto report = genuine_entanglement_report(c.n, effective_p(c), options);
    Outcome o;
    o.code = report.genuine ? kExitOk : kExitViolation;
    o.verdict = report.genuine ? "GENUINE" : "NOT_CERTIFIED";
    o.result = io::entanglement_to_json(report);
    std::ostringstream csv;
    csv.precision(17);
    csv << "cut,negativity,best_overlap,weight_argument\n";
    for (const auto &cut : report.cuts) {
        csv << '"' << cut.cut.str() << "\",";
        if (cut.negativity) {
            csv << *cut.negativity;
        }
        csv << ',' << cut.seesaw.best_overlap << ',';
        if (cut.weight_argument) {
            csv << (*cut.weight_argument ? "true" : "false");
        }
        csv << '\n';
    }
    o.csv = csv.str();
    return o;
}

SearchOptions search_options(const RunConfig &c) {
    SearchOptions options;
    options.lp.tol = c.tol;
    options.lp.column_generation = c.column_generation;
    options.polish_candidates = c.polish_candidates;
    options.polish_evaluations = c.polish_evaluations;
    return options;
}

Outcome cmd_lhv(const RunConfig &c) {
    auto state = build_state(c);
    Outcome o;
    std::string scenario_path = c.scenario_path;
    if (scenario_path.empty() && c.settings.size() > 5 && c.settings.ends_with(".json")) {
        scenario_path = c.settings;
    }
    if (!scenario_path.empty()) {
        Scenario scenario = io::scenario_from_json(io::read_json_file(scenario_path));
        Behavior b = behavior(state, scenario);
        LPOptions options = search_options(c).lp;
        LPResult lp = lp_membership(b, options);
        o.result = {
            {"scenario", io::scenario_to_json(scenario)},
            {"lp", io::lp_result_to_json(lp, scenario)},
            {"reconstruction_residual",
             lp.visibility > 0 ? Json(local_model_residual(b, lp)) : Json(nullptr)}};
        if (lp.certificate) {
            o.result["certificate_verified"] = check_certificate(*lp.certificate, b, c.tol);
        }
        o.code = lp.feasible_at_one ? kExitOk : kExitViolation;
        o.csv = io::behavior_to_csv(b);
    } else {
        if (c.settings.empty()) {
            fail(ErrorKind::InvalidArgument, "lhv needs --settings or --scenario");
        }
        auto counts = parse_settings(c.settings, c.n);
        auto result = optimize_settings(state, counts, c.restarts, c.seed, search_options(c));
        Behavior b = behavior(state, result.scenario);
        o.result = io::settings_result_to_json(result);
        if (result.lp.certificate) {
            o.result["certificate_verified"] = check_certificate(*result.lp.certificate, b, c.tol);
        }
        o.code = result.lp.feasible_at_one ? kExitOk : kExitViolation;
        o.csv = io::behavior_to_csv(b);
    }
    o.verdict = o.code == kExitOk ? "NO_VIOLATION_FOUND" : "VIOLATION_FOUND";
    return o;
}

Outcome cmd_eps_scan(const RunConfig &c, std::ostream &err) {
    if (c.grid.empty()) {
        fail(ErrorKind::InvalidArgument, "eps-scan needs --grid");
    }
    auto grid = parse_grid(c.grid);
    auto counts = parse_settings(c.settings.empty() ? "4" : c.settings, c.n);
    auto report = epsilon_scan(c.n, counts, grid, c.restarts, c.seed, search_options(c), [&](const ScanPoint &p) {
        err << "eps-scan: epsilon " << p.epsilon << " visibility " << p.visibility
            << (p.violation ? " violation" : "") << std::endl;
    });
    Outcome o;
    o.result = io::scan_to_json(report, c.tol);
    o.code = report.threshold ? kExitViolation : kExitOk;
    o.verdict = report.threshold ? "VIOLATION_FOUND" : "NO_VIOLATION_FOUND";
    std::ostringstream csv;
    csv.precision(17);
    csv << "epsilon,visibility,violation\n";
    for (const auto &p : report.points) {
        csv << p.epsilon << ',' << p.visibility << ',' << (p.violation ? 1 : 0) << '\n';
    }
    o.csv = csv.str();
    if (report.non_monotone) {
        err << "eps-scan: warning: visibility is not monotone in epsilon" << std::endl;
    }
    return o;
}

Outcome cmd_purify(const RunConfig &c) {
    if (c.n + 1 > kQubitCap) {
        fail(
            ErrorKind::DenseLimitExceeded,
            "purification needs " + std::to_string(c.n + 1) + " qubits; the cap is " + std::to_string(kQubitCap));
    }
    if (c.n > kDenseCap) {
        fail(ErrorKind::DenseLimitExceeded, "dense comparison limited to " + std::to_string(kDenseCap) + " qubits");
    }
    auto purification = make_purification(c.n);
    std::vector<int> keep(static_cast<size_t>(c.n));
    for (int k = 0; k < c.n; k++) {
        keep[static_cast<size_t>(k)] = k;
    }
    DenseOperator reduced = partial_trace(purification, keep);
    DenseOperator target = density_matrix(make_rho(c.n, 0.5));
    double deviation = (reduced - target).cwiseAbs().maxCoeff();
    Outcome o;
    o.verdict = deviation <= 1e-12 ? "MATCH" : "MISMATCH";
    o.code = deviation <= 1e-12 ? kExitOk : kExitViolation;
    o.result = {{"n", c.n}, {"ancilla_site", c.n}, {"max_deviation", deviation}};
    std::ostringstream csv;
    csv.precision(17);
    csv << "n,max_deviation\n" << c.n << ',' << deviation << '\n';
    o.csv = csv.str();
    return o;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DenseLimitExceeded:
        case ErrorKind::ScanTooLarge:
        case ErrorKind::ColumnCapExceeded:
            return kExitResource;
        case ErrorKind::SolverNumericalFailure:
            return kExitSolver;
        default:
            return kExitConfig;
    }
}

void add_common_options(CLI::App *sub, RunConfig &c) {
    sub->add_option("--n", c.n, "number of qubits");
    sub->add_option("--p", c.p, "weight of |W> in the mixture");
    sub->add_option("--epsilon", c.epsilon, "use p = 1/2 + epsilon");
    sub->add_option("--state", c.state, "rho | w | ghz");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--restarts", c.restarts, "random restarts");
    sub->add_option("--tol", c.tol, "LP reporting tolerance");
    sub->add_option("--format", c.format, "json | csv");
    sub->add_option("--output", c.output, "write the report to this file");
    sub->add_option("--threads", c.threads, "worker threads (MULTICORR_THREADS overrides)");
}

}  // namespace

std::vector<double> parse_grid(const std::string &text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        auto parts = split(text, ':');
        if (parts.size() != 3) {
            fail(ErrorKind::ParseError, "range grid must be start:stop:step");
        }
        double start = parse_number(parts[0]);
        double stop = parse_number(parts[1]);
        double step = parse_number(parts[2]);
        if (!(step > 0) || stop < start) {
            fail(ErrorKind::ParseError, "range grid needs step > 0 and stop >= start");
        }
        double count = std::floor((stop - start) / step + 1e-9);
        if (count > 1e5) {
            fail(ErrorKind::ParseError, "range grid too long");
        }
        for (int i = 0; i <= static_cast<int>(count); i++) {
            grid.push_back(std::round((start + i * step) * 1e12) / 1e12);
        }
    } else {
        for (const auto &part : split(text, ',')) {
            grid.push_back(parse_number(part));
        }
    }
    if (grid.empty()) {
        fail(ErrorKind::ParseError, "empty grid");
    }
    return grid;
}

std::vector<int> parse_settings(const std::string &text, int n) {
    std::vector<int> counts;
    for (const auto &part : split(text, ',')) {
        double v = parse_number(part);
        if (v != std::floor(v) || v < 1 || v > 16) {
            fail(ErrorKind::ParseError, "setting counts must be integers in [1, 16]");
        }
        counts.push_back(static_cast<int>(v));
    }
    if (counts.size() == 1) {
        counts.assign(static_cast<size_t>(n), counts[0]);
    }
    if (static_cast<int>(counts.size()) != n) {
        fail(ErrorKind::DimensionMismatch, "need one setting count per party");
    }
    return counts;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Pauli correlations, entanglement and local-realism tests for W-type mixtures", "multicorr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    RunConfig c;

    auto *correlators = app.add_subcommand("correlators", "scan Pauli correlators of a given weight");
    add_common_options(correlators, c);
    correlators->add_option("--weight", c.weight, "number of non-identity letters (default n)");
    correlators->add_flag("--omit-entries", c.omit_entries, "summary only");

    auto *cov = app.add_subcommand("covariance", "multiparty covariances of local observables");
    add_common_options(cov, c);
    cov->add_option("--pauli", c.pauli, "Pauli string; identity sites are left out");
    cov->add_option("--random", c.random_observables, "number of random Hermitian observable sets");

    auto *ent = app.add_subcommand("entanglement", "negativity and product-overlap evidence on every cut");
    add_common_options(ent, c);

    auto *lhv = app.add_subcommand("lhv", "local-realism test by linear programming");
    add_common_options(lhv, c);
    lhv->add_option("--settings", c.settings, "per-party setting counts, or a scenario file");
    lhv->add_option("--scenario", c.scenario_path, "scenario JSON file");
    lhv->add_option("--polish-candidates", c.polish_candidates, "restarts that receive the simplex polish");
    lhv->add_option("--polish-evals", c.polish_evaluations, "evaluations per simplex polish");
    lhv->add_flag("--column-generation", c.column_generation, "price strategies implicitly");

    auto *scan = app.add_subcommand("eps-scan", "critical visibility along the epsilon family");
    add_common_options(scan, c);
    scan->add_option("--settings", c.settings, "per-party setting counts");
    scan->add_option("--grid", c.grid, "start:stop:step or a comma-separated list");
    scan->add_option("--polish-candidates", c.polish_candidates, "restarts that receive the simplex polish");
    scan->add_option("--polish-evals", c.polish_evaluations, "evaluations per simplex polish");
    scan->add_flag("--column-generation", c.column_generation, "price strategies implicitly");

    auto *purify = app.add_subcommand("purify", "trace the ancilla out of the purification");
    add_common_options(purify, c);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion &e) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        validate(c);
        if (const char *env = std::getenv("MULTICORR_THREADS"); env && *env) {
            set_thread_count(static_cast<size_t>(std::max(1.0, parse_number(env))));
        } else if (c.threads) {
            set_thread_count(static_cast<size_t>(*c.threads));
        }

        Outcome o;
        if (c.command == "correlators") {
            o = cmd_correlators(c);
        } else if (c.command == "covariance") {
            o = cmd_covariance(c);
        } else if (c.command == "entanglement") {
            o = cmd_entanglement(c);
        } else if (c.command == "lhv") {
            o = cmd_lhv(c);
        } else if (c.command == "eps-scan") {
            o = cmd_eps_scan(c, err);
        } else {
            o = cmd_purify(c);
        }

        std::string text;
        if (c.format == "csv") {
            text = o.csv;
        } else {
            Json report{
                {"tool", "multicorr"},
                {"version", kVersion},
                {"config", config_json(c)},
                {"verdict", o.verdict},
                {"exit_code", o.code},
                {"result", std::move(o.result)}};
            text = report.dump(2) + "\n";
        }
        if (c.output.empty()) {
            out << text;
        } else {
            std::ofstream file(c.output);
            if (!file) {
                fail(ErrorKind::InvalidArgument, "cannot write " + c.output);
            }
            file << text;
        }
        err << c.command << ": " << o.verdict << '\n';
        return o.code;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::bad_alloc &) {
        err << "error: out of memory\n";
        return kExitResource;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}

}  // namespace multicorr::cli
