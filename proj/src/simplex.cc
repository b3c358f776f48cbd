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

#include "multicorr/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "multicorr/error.h"

namespace multicorr::lp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void ColumnSource::products(std::span<const double> y, std::span<double> out) const {
    std::vector<double> col(num_rows());
    for (size_t j = 0; j < num_columns(); j++) {
        column(j, col);
        double total = 0;
        for (size_t i = 0; i < col.size(); i++) {
            total += col[i] * y[i];
        }
        out[j] = total;
    }
}

std::optional<size_t> ColumnSource::search_entering(std::span<const double>, bool, double) const {
    fail(ErrorKind::InvalidArgument, "column source does not implement heuristic pricing");
}

DenseColumns::DenseColumns(MatrixXd a, VectorXd c) : a_(std::move(a)), c_(std::move(c)) {
    if (c_.size() != a_.cols()) {
        fail(ErrorKind::DimensionMismatch, "cost vector length differs from column count");
    }
}

void DenseColumns::column(size_t j, std::span<double> out) const {
    for (Index i = 0; i < a_.rows(); i++) {
        out[i] = a_(i, static_cast<Index>(j));
    }
}

void DenseColumns::products(std::span<const double> y, std::span<double> out) const {
    Eigen::Map<const VectorXd> yv(y.data(), a_.rows());
    Eigen::Map<VectorXd> ov(out.data(), a_.cols());
    ov.noalias() = a_.transpose() * yv;
}

std::string_view status_name(Status status) {
    switch (status) {
        case Status::Optimal:
            return "optimal";
        case Status::Infeasible:
            return "infeasible";
        case Status::Unbounded:
            return "unbounded";
        case Status::IterationLimit:
            return "iteration_limit";
        case Status::NumericalFailure:
            return "numerical_failure";
    }
    return "unknown";
}

double Solution::value(size_t j) const {
    for (size_t i = 0; i < basis.size(); i++) {
        if (basis[i] == j) {
            return basic_values[i];
        }
    }
    return 0;
}

namespace {

class RevisedSimplex {
   public:
    RevisedSimplex(const ColumnSource &source, std::span<const double> b, const Options &options)
        : source_(source),
          options_(options),
          m_(source.num_rows()),
          n_(source.num_columns()),
          sign_(static_cast<Index>(m_)),
          b_(static_cast<Index>(m_)),
          in_basis_(n_, 0),
          column_buffer_(m_),
          y_source_(m_) {
        if (b.size() != m_) {
            fail(ErrorKind::DimensionMismatch, "right-hand side length differs from row count");
        }
        for (size_t i = 0; i < m_; i++) {
            sign_(i) = b[i] < 0 ? -1.0 : 1.0;
            b_(i) = sign_(i) * b[i];
        }
        if (options_.heuristic_pricing == false && !source.supports_full_pricing()) {
            options_.heuristic_pricing = true;
        }
        if (!options_.heuristic_pricing) {
            products_.resize(n_);
        }
    }

    Solution run(std::span<const size_t> warm_basis) {
        Solution sol;
        VectorXd exact_b = b_;
        bool perturbed = options_.perturbation > 0;
        if (perturbed) {
            for (size_t i = 0; i < m_; i++) {
                double u = std::fmod(0.5 + 0.6180339887498949 * static_cast<double>(i), 1.0);
                b_(i) += options_.perturbation * (1.0 + b_(i)) * (0.5 + u);
            }
        }
        WarmStart warm = warm_basis.empty() ? WarmStart::Rejected : try_warm_start(warm_basis);
        sol.warm_started = warm != WarmStart::Rejected;
        if (warm != WarmStart::Feasible) {
            if (warm == WarmStart::Rejected) {
                cold_start();
            }
            Status s = iterate(true);
            sol.phase_one_iterations = iterations_;
            if (s == Status::NumericalFailure || s == Status::IterationLimit) {
                return finish(sol, s);
            }
            double infeasibility = 0;
            for (size_t i = 0; i < m_; i++) {
                if (basis_[i] >= n_) {
                    infeasibility += std::max(0.0, x_(i));
                }
            }
            if (infeasibility > options_.feasibility_tol * (1.0 + b_.cwiseAbs().maxCoeff())) {
                return finish(sol, Status::Infeasible);
            }
        }
        Status s = Status::Optimal;
        // Re-verify optimality after a fresh factorization; a drifted inverse
        // can make a nonoptimal basis look optimal.
        for (int attempt = 0; attempt < 4; attempt++) {
            s = iterate(false);
            if (s != Status::Optimal) {
                break;
            }
            if (!refactor()) {
                s = Status::NumericalFailure;
                break;
            }
            if (!price(false).has_value()) {
                break;
            }
        }
        if (perturbed && s == Status::Optimal) {
            b_ = exact_b;
            s = restore_exact_rhs();
        }
        return finish(sol, s);
    }

   private:
    // Infeasibility of basic row i: negative values, or a nonzero artificial.
    double row_violation(size_t i) const {
        double v = std::max(0.0, -x_(static_cast<Index>(i)));
        if (basis_[i] >= n_) {
            v = std::abs(x_(static_cast<Index>(i)));
        }
        return v;
    }

    // After dropping the perturbation the basis stays dual feasible; dual
    // simplex pivots remove the residual primal infeasibility, then primal
    // pricing re-verifies optimality.
    Status restore_exact_rhs() {
        if (!refactor()) {
            return Status::NumericalFailure;
        }
        double tol = options_.feasibility_tol * (1.0 + b_.cwiseAbs().maxCoeff());
        std::vector<double> row_source(m_);
        std::vector<double> alpha(n_);
        std::vector<double> reduced(n_);
        int limit = static_cast<int>(10 * m_) + 100;
        for (int step = 0; step < limit; step++) {
            size_t r = m_;
            double worst = tol;
            for (size_t i = 0; i < m_; i++) {
                double v = row_violation(i);
                if (v > worst) {
                    worst = v;
                    r = i;
                }
            }
            if (r == m_) {
                for (Index i = 0; i < x_.size(); i++) {
                    if (basis_[static_cast<size_t>(i)] >= n_ || x_(i) < 0) {
                        x_(i) = basis_[static_cast<size_t>(i)] >= n_ ? 0.0 : std::max(0.0, x_(i));
                    }
                }
                break;
            }
            if (options_.heuristic_pricing) {
                return Status::NumericalFailure;
            }
            if (step == limit - 1 || iterations_ >= options_.max_iterations) {
                return Status::NumericalFailure;
            }
            compute_duals(false);
            source_.products(y_source_, reduced);
            for (size_t i = 0; i < m_; i++) {
                row_source[i] = sign_(static_cast<Index>(i)) * binv_(static_cast<Index>(r), static_cast<Index>(i));
            }
            source_.products(row_source, alpha);
            double direction = x_(static_cast<Index>(r)) < 0 ? -1.0 : 1.0;
            size_t entering = n_;
            double best_ratio = std::numeric_limits<double>::infinity();
            double best_alpha = 0;
            for (size_t j = 0; j < n_; j++) {
                if (in_basis_[j]) {
                    continue;
                }
                double a = direction * alpha[j];
                if (a <= options_.pivot_tol) {
                    continue;
                }
                double d = std::max(0.0, source_.cost(j) - reduced[j]);
                double ratio = d / a;
                if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && a > best_alpha)) {
                    best_ratio = ratio;
                    best_alpha = a;
                    entering = j;
                }
            }
            if (entering == n_) {
                return Status::NumericalFailure;
            }
            VectorXd u;
            fetch(entering, u);
            u = binv_ * u;
            pivot(static_cast<Index>(r), entering, u, x_(static_cast<Index>(r)) / u(static_cast<Index>(r)));
            if (since_refactor_ >= options_.refactor_interval && !refactor()) {
                return Status::NumericalFailure;
            }
        }
        Status s = Status::Optimal;
        for (int attempt = 0; attempt < 4; attempt++) {
            s = iterate(false);
            if (s != Status::Optimal) {
                break;
            }
            if (!refactor()) {
                s = Status::NumericalFailure;
                break;
            }
            if (!price(false).has_value()) {
                break;
            }
        }
        return s;
    }

    void pivot(Index leave, size_t q, const VectorXd &u, double theta) {
        x_ -= theta * u;
        x_(leave) = theta;
        Eigen::RowVectorXd pivot_row = binv_.row(leave) / u(leave);
        binv_.noalias() -= u * pivot_row;
        binv_.row(leave) = pivot_row;
        if (basis_[static_cast<size_t>(leave)] < n_) {
            in_basis_[basis_[static_cast<size_t>(leave)]] = 0;
        }
        basis_[static_cast<size_t>(leave)] = q;
        in_basis_[q] = 1;
        iterations_++;
        since_refactor_++;
    }

    void fetch(size_t j, VectorXd &out) {
        out.resize(static_cast<Index>(m_));
        if (j == n_ + m_) {
            out = extra_column_;
            return;
        }
        if (j >= n_) {
            out.setZero();
            out(static_cast<Index>(j - n_)) = 1.0;
            return;
        }
        source_.column(j, column_buffer_);
        for (size_t i = 0; i < m_; i++) {
            out(i) = sign_(i) * column_buffer_[i];
        }
    }

    double phase_cost(size_t j, bool phase_one) const {
        if (j >= n_) {
            return phase_one ? 1.0 : 0.0;
        }
        return phase_one ? 0.0 : source_.cost(j);
    }

    void cold_start() {
        basis_.resize(m_);
        for (size_t i = 0; i < m_; i++) {
            basis_[i] = n_ + i;
        }
        std::fill(in_basis_.begin(), in_basis_.end(), 0);
        binv_ = MatrixXd::Identity(static_cast<Index>(m_), static_cast<Index>(m_));
        x_ = b_;
        since_refactor_ = 0;
    }

    enum class WarmStart { Rejected, Feasible, NeedsPhaseOne };

    // A primal infeasible warm basis is repaired with one artificial column
    // a = b - B x+, which replaces the most negative basic variable; phase
    // one then drives that artificial to zero.
    WarmStart try_warm_start(std::span<const size_t> warm) {
        if (warm.size() != m_) {
            return WarmStart::Rejected;
        }
        std::vector<char> seen(n_, 0);
        for (size_t j : warm) {
            if (j >= n_ || seen[j]) {
                return WarmStart::Rejected;
            }
            seen[j] = 1;
        }
        basis_.assign(warm.begin(), warm.end());
        in_basis_ = seen;
        if (!refactor()) {
            return WarmStart::Rejected;
        }
        Index r;
        if (x_.minCoeff(&r) >= -options_.feasibility_tol) {
            return WarmStart::Feasible;
        }
        VectorXd col;
        extra_column_ = b_;
        for (size_t i = 0; i < m_; i++) {
            double xi = x_(static_cast<Index>(i));
            if (xi > 0) {
                fetch(basis_[i], col);
                extra_column_ -= xi * col;
            }
        }
        in_basis_[basis_[static_cast<size_t>(r)]] = 0;
        basis_[static_cast<size_t>(r)] = n_ + m_;
        if (!refactor() || x_.minCoeff() < -options_.feasibility_tol) {
            return WarmStart::Rejected;
        }
        return WarmStart::NeedsPhaseOne;
    }

    bool refactor() {
        MatrixXd bmat(static_cast<Index>(m_), static_cast<Index>(m_));
        VectorXd col;
        for (size_t i = 0; i < m_; i++) {
            fetch(basis_[i], col);
            bmat.col(static_cast<Index>(i)) = col;
        }
        Eigen::PartialPivLU<MatrixXd> lu(bmat);
        if (!(lu.rcond() > 1e-14)) {
            return false;
        }
        binv_ = lu.inverse();
        x_ = binv_ * b_;
        since_refactor_ = 0;
        return true;
    }

    void compute_duals(bool phase_one) {
        VectorXd cb(static_cast<Index>(m_));
        for (size_t i = 0; i < m_; i++) {
            cb(i) = phase_cost(basis_[i], phase_one);
        }
        y_ = binv_.transpose() * cb;
        for (size_t i = 0; i < m_; i++) {
            y_source_[i] = sign_(i) * y_(i);
        }
    }

    std::optional<size_t> price(bool phase_one) {
        compute_duals(phase_one);
        double tol = options_.optimality_tol;
        if (options_.heuristic_pricing) {
            auto j = source_.search_entering(y_source_, phase_one, tol);
            if (j.has_value() && (*j >= n_ || in_basis_[*j])) {
                return std::nullopt;
            }
            return j;
        }
        source_.products(y_source_, products_);
        std::optional<size_t> best;
        double best_d = -tol;
        for (size_t j = 0; j < n_; j++) {
            if (in_basis_[j]) {
                continue;
            }
            double d = phase_cost(j, phase_one) - products_[j];
            if (bland_) {
                if (d < -tol) {
                    return j;
                }
            } else if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        return best;
    }

    Status iterate(bool phase_one) {
        VectorXd u;
        while (true) {
            if (iterations_ >= options_.max_iterations) {
                return Status::IterationLimit;
            }
            if (since_refactor_ >= options_.refactor_interval && !refactor()) {
                return Status::NumericalFailure;
            }
            auto entering = price(phase_one);
            if (!entering.has_value()) {
                return Status::Optimal;
            }
            size_t q = *entering;
            fetch(q, u);
            u = binv_ * u;

            Index leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < static_cast<Index>(m_); i++) {
                double ui = u(i);
                bool artificial = basis_[i] >= n_;
                double ratio;
                if (ui > options_.pivot_tol) {
                    ratio = std::max(0.0, x_(i)) / ui;
                } else if (!phase_one && artificial && ui < -options_.pivot_tol) {
                    // Artificials still basic in phase two are pinned at zero.
                    ratio = 0;
                } else {
                    continue;
                }
                bool take = false;
                if (ratio < best_ratio - 1e-12) {
                    take = true;
                } else if (ratio <= best_ratio + 1e-12 && leave >= 0) {
                    bool leave_artificial = basis_[leave] >= n_;
                    if (artificial != leave_artificial) {
                        take = artificial;
                    } else if (bland_) {
                        take = basis_[i] < basis_[leave];
                    } else {
                        take = std::abs(ui) > std::abs(u(leave));
                    }
                }
                if (take) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave < 0) {
                return Status::Unbounded;
            }

            double theta = best_ratio;
            pivot(leave, q, u, theta);
            if (theta <= 1e-12) {
                degenerate_streak_++;
            } else {
                degenerate_streak_ = 0;
            }
            bland_ = degenerate_streak_ > options_.degenerate_limit;
            bland_used_ = bland_used_ || bland_;
        }
    }

    Solution finish(Solution &sol, Status status) {
        if (status == Status::Optimal) {
            if (!refactor()) {
                status = Status::NumericalFailure;
            } else {
                compute_duals(false);
            }
        }
        sol.status = status;
        sol.iterations = iterations_;
        sol.bland_used = bland_used_;
        sol.basis = basis_;
        sol.basic_values.assign(x_.data(), x_.data() + x_.size());
        sol.duals = y_source_;
        sol.objective = 0;

        VectorXd residual = -b_;
        VectorXd col;
        for (size_t i = 0; i < m_; i++) {
            if (basis_[i] < n_) {
                sol.objective += source_.cost(basis_[i]) * x_(i);
                fetch(basis_[i], col);
                residual += x_(i) * col;
            } else if (status == Status::Optimal && std::abs(x_(i)) > 1e-7) {
                sol.status = Status::NumericalFailure;
            }
        }
        sol.residual = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
        if (sol.status == Status::Optimal) {
            double scale = 1.0 + b_.cwiseAbs().maxCoeff();
            if (sol.residual > 1e-7 * scale || x_.minCoeff() < -1e-7 * scale) {
                sol.status = Status::NumericalFailure;
            }
        }
        return std::move(sol);
    }

    const ColumnSource &source_;
    Options options_;
    size_t m_;
    size_t n_;
    VectorXd sign_;
    VectorXd b_;
    std::vector<size_t> basis_;
    std::vector<char> in_basis_;
    MatrixXd binv_;
    VectorXd x_;
    VectorXd extra_column_;
    VectorXd y_;
    std::vector<double> column_buffer_;
    std::vector<double> y_source_;
    std::vector<double> products_;
    int iterations_ = 0;
    int since_refactor_ = 0;
    int degenerate_streak_ = 0;
    bool bland_ = false;
    bool bland_used_ = false;
};

}  // namespace

Solution solve(
    const ColumnSource &source, std::span<const double> b, const Options &options, std::span<const size_t> warm_basis) {
    RevisedSimplex solver(source, b, options);
    Solution sol = solver.run(warm_basis);
    if (options.perturbation > 0 && sol.status != Status::Optimal && sol.status != Status::Unbounded) {
        // Perturbing b can make dependent rows inconsistent; retry exactly.
        Options exact = options;
        exact.perturbation = 0;
        RevisedSimplex retry(source, b, exact);
        int spent = sol.iterations;
        sol = retry.run(warm_basis);
        sol.iterations += spent;
    }
    return sol;
}

}  // namespace multicorr::lp
