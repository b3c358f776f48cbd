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

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace multicorr::lp {

/// Column access for the standard-form problem
///     minimize c^T x  subject to  A x = b,  x >= 0.
/// Implementations may generate columns on demand instead of storing A.
class ColumnSource {
   public:
    virtual ~ColumnSource() = default;

    virtual size_t num_rows() const = 0;
    virtual size_t num_columns() const = 0;
    virtual void column(size_t j, std::span<double> out) const = 0;
    virtual double cost(size_t j) const = 0;

    /// out[j] = a_j^T y for every column. The default walks column().
    virtual void products(std::span<const double> y, std::span<double> out) const;

    /// Whether products() is affordable. Sources that return false must
    /// implement search_entering().
    virtual bool supports_full_pricing() const {
        return true;
    }

    /// Heuristic pricing: a column whose reduced cost (phase cost minus
    /// a_j^T y) is below -tol, or nothing if the search finds none. Phase-one
    /// costs are zero for every real column.
    virtual std::optional<size_t> search_entering(std::span<const double> y, bool phase_one, double tol) const;
};

/// Explicit dense matrix.
class DenseColumns : public ColumnSource {
   public:
    DenseColumns(Eigen::MatrixXd a, Eigen::VectorXd c);

    size_t num_rows() const override {
        return static_cast<size_t>(a_.rows());
    }
    size_t num_columns() const override {
        return static_cast<size_t>(a_.cols());
    }
    void column(size_t j, std::span<double> out) const override;
    double cost(size_t j) const override {
        return c_(static_cast<Eigen::Index>(j));
    }
    void products(std::span<const double> y, std::span<double> out) const override;

   private:
    Eigen::MatrixXd a_;
    Eigen::VectorXd c_;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

std::string_view status_name(Status status);

struct Options {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-9;
    int max_iterations = 200000;
    int refactor_interval = 64;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    int degenerate_limit = 50;
    /// Use search_entering() instead of full pricing.
    bool heuristic_pricing = false;
    /// Relative size of the deterministic right-hand-side perturbation used
    /// against degeneracy; 0 disables it.
    double perturbation = 1e-7;
};

struct Solution {
    Status status = Status::NumericalFailure;
    double objective = 0;
    /// basis[i] is the column basic in row i; ids >= num_columns() are
    /// artificial columns left on redundant rows.
    std::vector<size_t> basis;
    std::vector<double> basic_values;
    /// Simplex multipliers y with c_B = B^T y, in the caller's row signs.
    std::vector<double> duals;
    int iterations = 0;
    int phase_one_iterations = 0;
    bool bland_used = false;
    bool warm_started = false;
    /// max |A x - b| of the returned point.
    double residual = 0;

    /// Value of column j in the returned point (0 if nonbasic).
    double value(size_t j) const;
};

/// Two-phase revised simplex with a dense explicit basis inverse. Dantzig
/// pricing, switching to Bland's rule after a run of degenerate pivots.
/// `warm_basis`, when it lists num_rows() real columns forming a primal
/// feasible basis, skips phase one.
Solution solve(
    const ColumnSource &source,
    std::span<const double> b,
    const Options &options = {},
    std::span<const size_t> warm_basis = {});

}  // namespace multicorr::lp
