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

#include "multicorr/settings_search.h"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <random>
#include <string>

#include "multicorr/error.h"
#include "multicorr/parallel.h"
#include "multicorr/pauli.h"
#include "multicorr/tensor.h"

namespace multicorr {

namespace {

constexpr int kTensorQubitCap = 10;
constexpr uint64_t kEpsilonSeedStride = 7919;

using Directions = std::vector<std::vector<Bloch>>;

// Rows: I, then one row per direction with the Bloch vector in the X, Y, Z columns.
Eigen::MatrixXd direction_matrix(const std::vector<Bloch> &dirs) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dirs.size()) + 1, 4);
    c(0, 0) = 1;
    for (size_t j = 0; j < dirs.size(); j++) {
        for (int i = 0; i < 3; i++) {
            c(static_cast<Eigen::Index>(j) + 1, i + 1) = dirs[j][i];
        }
    }
    return c;
}

Bloch unit(const Bloch &v) {
    double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return {v[0] / norm, v[1] / norm, v[2] / norm};
}

Bloch random_direction(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    for (;;) {
        Bloch d{g(rng), g(rng), g(rng)};
        if (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] > 1e-6) {
            return unit(d);
        }
    }
}

// M(t, a) = d G / d C_k(t, a) for G = sum_t y(t) E(t).
Eigen::MatrixXd functional_gradient(
    std::span<const double> tensor, std::span<const double> y, const Directions &dirs, size_t k) {
    size_t n = dirs.size();
    std::vector<double> reduced(y.begin(), y.end());
    std::vector<size_t> dims(n);
    for (size_t q = 0; q < n; q++) {
        dims[q] = dirs[q].size() + 1;
    }
    for (size_t q = n; q-- > 0;) {
        if (q != k) {
            reduced = mode_product(reduced, dims, q, direction_matrix(dirs[q]).transpose());
        }
    }
    // reduced has extent 4 on every mode except k, where it has m_k + 1.
    size_t rows = dims[k];
    size_t post = 1;
    for (size_t q = k + 1; q < n; q++) {
        post *= 4;
    }
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), 4);
    for (size_t i = 0; i < tensor.size(); i++) {
        if (tensor[i] == 0) {
            continue;
        }
        size_t a_k = (i / post) % 4;
        size_t pre = i / (post * 4);
        size_t rest = i % post;
        for (size_t t = 0; t < rows; t++) {
            grad(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(a_k)) +=
                tensor[i] * reduced[(pre * rows + t) * post + rest];
        }
    }
    return grad;
}

class RestartSearch {
   public:
    RestartSearch(std::span<const double> tensor, const SearchOptions &options)
        : tensor_(tensor), options_(options) {
    }

    double solve(const Directions &dirs) {
        Scenario sc = Scenario::make(dirs);
        auto e = scenario_correlators(tensor_, sc);
        LPResult r = lp_membership_correlators(sc, e, options_.lp, basis_);
        basis_ = r.basis;
        duals_ = r.dual_functional;
        solves_++;
        if (r.visibility < best_) {
            best_ = r.visibility;
            best_dirs_ = dirs;
        }
        return r.visibility;
    }

    void guided(Directions dirs) {
        solve(dirs);
        int stall = 0;
        double reference = best_;
        for (int round = 0; round < options_.guided_rounds; round++) {
            for (size_t k = 0; k < dirs.size(); k++) {
                for (size_t j = 0; j < dirs[k].size(); j++) {
                    Eigen::MatrixXd grad = functional_gradient(tensor_, duals_, dirs, k);
                    auto row = static_cast<Eigen::Index>(j) + 1;
                    Bloch g{grad(row, 1), grad(row, 2), grad(row, 3)};
                    if (g[0] * g[0] + g[1] * g[1] + g[2] * g[2] > 1e-24) {
                        dirs[k][j] = unit(g);
                    }
                }
            }
            solve(dirs);
            if (best_ < reference - 1e-9) {
                reference = best_;
                stall = 0;
            } else if (++stall >= options_.guided_patience) {
                break;
            }
        }
    }

    void polish() {
        if (options_.polish_evaluations <= 0) {
            return;
        }
        Directions start = best_dirs_;
        std::vector<size_t> shape;
        std::vector<double> angles;
        for (const auto &party : start) {
            shape.push_back(party.size());
            for (const auto &d : party) {
                angles.push_back(std::acos(std::clamp(d[2], -1.0, 1.0)));
                angles.push_back(std::atan2(d[1], d[0]));
            }
        }
        size_t dim = angles.size();
        struct Context {
            RestartSearch *self;
            std::vector<size_t> *shape;
            std::exception_ptr error;
        } ctx{this, &shape, nullptr};
        gsl_multimin_function f;
        f.n = dim;
        f.params = &ctx;
        f.f = [](const gsl_vector *x, void *params) -> double {
            auto *c = static_cast<Context *>(params);
            if (c->error) {
                return GSL_NAN;
            }
            try {
                Directions dirs;
                size_t idx = 0;
                for (size_t count : *c->shape) {
                    dirs.emplace_back();
                    for (size_t j = 0; j < count; j++) {
                        double theta = gsl_vector_get(x, idx++);
                        double phi = gsl_vector_get(x, idx++);
                        dirs.back().push_back(
                            unit({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)}));
                    }
                }
                return c->self->solve(dirs);
            } catch (...) {
                c->error = std::current_exception();
                return GSL_NAN;
            }
        };

        std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(dim), gsl_vector_free);
        std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(dim), gsl_vector_free);
        for (size_t i = 0; i < dim; i++) {
            gsl_vector_set(x.get(), i, angles[i]);
        }
        gsl_vector_set_all(step.get(), options_.polish_step);
        std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> minimizer(
            gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim), gsl_multimin_fminimizer_free);
        int budget_end = solves_ + options_.polish_evaluations;
        if (gsl_multimin_fminimizer_set(minimizer.get(), &f, x.get(), step.get()) == GSL_SUCCESS) {
            while (solves_ < budget_end && !ctx.error) {
                if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) {
                    break;
                }
                double size = gsl_multimin_fminimizer_size(minimizer.get());
                if (gsl_multimin_test_size(size, options_.polish_size_tol) == GSL_SUCCESS) {
                    break;
                }
            }
        }
        if (ctx.error) {
            std::rethrow_exception(ctx.error);
        }
    }

    double best() const {
        return best_;
    }
    const Directions &best_dirs() const {
        return best_dirs_;
    }
    int solves() const {
        return solves_;
    }

   private:
    std::span<const double> tensor_;
    const SearchOptions &options_;
    std::vector<size_t> basis_;
    std::vector<double> duals_;
    double best_ = std::numeric_limits<double>::infinity();
    Directions best_dirs_;
    int solves_ = 0;
};

struct GslErrorHandlerGuard {
    gsl_error_handler_t *previous;
    GslErrorHandlerGuard() : previous(gsl_set_error_handler_off()) {
    }
    ~GslErrorHandlerGuard() {
        gsl_set_error_handler(previous);
    }
};

}  // namespace

std::vector<double> pauli_tensor(const LowRankState &state) {
    int n = state.num_qubits();
    if (n > kTensorQubitCap) {
        fail(ErrorKind::ScanTooLarge, "Pauli tensor limited to " + std::to_string(kTensorQubitCap) + " qubits");
    }
    size_t total = size_t{1} << (2 * n);
    std::vector<double> tensor(total);
    parallel_chunks(total, 256, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; i++) {
            std::vector<Pauli> letters(static_cast<size_t>(n));
            for (int k = 0; k < n; k++) {
                letters[static_cast<size_t>(k)] = static_cast<Pauli>((i >> (2 * (n - 1 - k))) & 3);
            }
            tensor[i] = correlator(state, PauliString(std::move(letters)));
        }
    });
    return tensor;
}

std::vector<double> scenario_correlators(std::span<const double> tensor, const Scenario &scenario) {
    size_t n = static_cast<size_t>(scenario.num_parties());
    if (tensor.size() != (size_t{1} << (2 * n))) {
        fail(ErrorKind::DimensionMismatch, "Pauli tensor does not match the scenario");
    }
    std::vector<double> e(tensor.begin(), tensor.end());
    std::vector<size_t> dims(n, 4);
    for (size_t k = n; k-- > 0;) {
        e = mode_product(e, dims, k, direction_matrix(scenario.settings()[k]));
    }
    return e;
}

Scenario scenario_from_angles(std::span<const int> settings, std::span<const double> angles) {
    size_t expected = 0;
    for (int m : settings) {
        expected += 2 * static_cast<size_t>(std::max(m, 0));
    }
    if (angles.size() != expected) {
        fail(ErrorKind::DimensionMismatch, "angle vector does not match the setting counts");
    }
    Directions dirs;
    size_t idx = 0;
    for (int m : settings) {
        dirs.emplace_back();
        for (int j = 0; j < m; j++) {
            double theta = angles[idx++];
            double phi = angles[idx++];
            dirs.back().push_back(
                unit({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)}));
        }
    }
    return Scenario::make(std::move(dirs));
}

SettingsResult optimize_settings(
    const LowRankState &state,
    std::span<const int> settings,
    int restarts,
    uint64_t seed,
    const SearchOptions &options) {
    int n = state.num_qubits();
    if (static_cast<int>(settings.size()) != n) {
        fail(ErrorKind::DimensionMismatch, "need one setting count per party");
    }
    for (int m : settings) {
        if (m < 1 || m > 16) {
            fail(ErrorKind::InvalidArgument, "setting counts must lie in [1, 16]");
        }
    }
    if (restarts < 0 || (restarts == 0 && !options.initial)) {
        fail(ErrorKind::InvalidArgument, "need at least one restart");
    }
    if (options.initial) {
        const auto &init = options.initial->settings();
        bool same = static_cast<int>(init.size()) == n;
        for (size_t k = 0; same && k < init.size(); k++) {
            same = static_cast<int>(init[k].size()) == settings[k];
        }
        if (!same) {
            fail(ErrorKind::DimensionMismatch, "initial scenario does not match the setting counts");
        }
    }
    // Fail early on the column cap before spawning restarts.
    uint64_t strategies = 1;
    for (int m : settings) {
        strategies *= uint64_t{1} << m;
    }
    if (strategies > options.lp.column_cap && !options.lp.column_generation) {
        fail(
            ErrorKind::ColumnCapExceeded,
            std::to_string(strategies) + " deterministic strategies exceed the column cap of " +
                std::to_string(options.lp.column_cap));
    }

    GslErrorHandlerGuard guard;
    auto tensor = pauli_tensor(state);
    size_t offset = options.initial ? 1 : 0;
    size_t total = offset + static_cast<size_t>(restarts);
    std::vector<RestartOutcome> outcomes(total);
    std::vector<Directions> found(total);
    parallel_chunks(total, 1, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; i++) {
            Directions start;
            if (i < offset) {
                start = options.initial->settings();
            } else {
                uint64_t index = i - offset;
                std::seed_seq seq{
                    static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(index),
                    static_cast<uint32_t>(index >> 32)};
                std::mt19937_64 rng(seq);
                for (int m : settings) {
                    start.emplace_back();
                    for (int j = 0; j < m; j++) {
                        start.back().push_back(random_direction(rng));
                    }
                }
            }
            RestartSearch search(tensor, options);
            search.guided(start);
            outcomes[i].guided_visibility = search.best();
            outcomes[i].final_visibility = search.best();
            outcomes[i].lp_solves = search.solves();
            found[i] = search.best_dirs();
        }
    });

    std::vector<size_t> order(total);
    for (size_t i = 0; i < total; i++) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return outcomes[a].guided_visibility < outcomes[b].guided_visibility;
    });
    order.resize(std::min(total, static_cast<size_t>(std::max(options.polish_candidates, 0))));
    parallel_chunks(order.size(), 1, [&](size_t begin, size_t end) {
        for (size_t c = begin; c < end; c++) {
            size_t i = order[c];
            RestartSearch search(tensor, options);
            search.solve(found[i]);
            search.polish();
            outcomes[i].polished = true;
            outcomes[i].final_visibility = search.best();
            outcomes[i].lp_solves += search.solves();
            found[i] = search.best_dirs();
        }
    });

    size_t best = 0;
    for (size_t i = 1; i < total; i++) {
        if (outcomes[i].final_visibility < outcomes[best].final_visibility) {
            best = i;
        }
    }
    Scenario scenario = Scenario::make(found[best]);
    SettingsResult result{
        scenario, lp_membership(behavior(state, scenario), options.lp), static_cast<int>(best) - static_cast<int>(offset),
        std::move(outcomes), 0};
    for (const auto &o : result.restarts) {
        result.lp_solves += o.lp_solves;
    }
    result.lp_solves++;
    return result;
}

bool visibility_non_monotone(std::span<const ScanPoint> points, double tol) {
    std::vector<const ScanPoint *> sorted;
    for (const auto &p : points) {
        sorted.push_back(&p);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const ScanPoint *a, const ScanPoint *b) {
        return a->epsilon < b->epsilon;
    });
    for (size_t i = 1; i < sorted.size(); i++) {
        if (sorted[i]->visibility > sorted[i - 1]->visibility + tol) {
            return true;
        }
    }
    return false;
}

ScanReport epsilon_scan(
    int n,
    std::span<const int> settings,
    std::span<const double> grid,
    int restarts,
    uint64_t seed,
    const SearchOptions &options,
    const std::function<void(const ScanPoint &)> &progress) {
    if (grid.empty()) {
        fail(ErrorKind::InvalidArgument, "epsilon grid is empty");
    }
    for (double eps : grid) {
        if (!(eps >= 0 && eps <= 0.5)) {
            fail(ErrorKind::InvalidArgument, "epsilon values must lie in [0, 0.5]");
        }
    }
    ScanReport report;
    report.n = n;
    report.settings.assign(settings.begin(), settings.end());
    std::optional<Scenario> previous;
    for (size_t i = 0; i < grid.size(); i++) {
        SearchOptions local = options;
        if (previous) {
            local.initial = previous;
        }
        ScanPoint point{
            grid[i], 0, false,
            optimize_settings(make_rho(n, 0.5 + grid[i]), settings, restarts, seed + kEpsilonSeedStride * i, local)};
        point.visibility = point.search.lp.visibility;
        point.violation = !point.search.lp.feasible_at_one;
        previous = point.search.scenario;
        if (progress) {
            progress(point);
        }
        report.points.push_back(std::move(point));
    }
    for (const auto &p : report.points) {
        if (p.violation && (!report.threshold || p.epsilon < *report.threshold)) {
            report.threshold = p.epsilon;
        }
    }
    report.non_monotone = visibility_non_monotone(report.points, options.lp.tol);
    return report;
}

}  // namespace multicorr
