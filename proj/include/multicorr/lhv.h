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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multicorr/qstate.h"
#include "multicorr/simplex.h"

namespace multicorr {

using Bloch = std::array<double, 3>;

inline constexpr uint64_t kDefaultColumnCap = 200'000;
inline constexpr double kDefaultLpTolerance = 1e-5;
inline constexpr double kMaxVisibility = 2.0;

/// Projective measurement settings: party k picks one of settings[k].size()
/// directions and measures n·sigma with outcomes +1/-1.
///
/// Indexing conventions shared by Behavior, the LP and the certificates:
///  - setting tuples are mixed-radix numbers with party 0 most significant;
///  - outcome tuples are n-bit numbers with party 0 the most significant bit,
///    bit value 0 meaning outcome +1 and 1 meaning -1;
///  - a deterministic strategy is a mixed-radix number over parties (party 0
///    most significant) whose digit for party k is an m_k-bit word, bit j
///    set meaning outcome -1 for setting j.
class Scenario {
   public:
    /// Validates unit norms (within 1e-10) and at least one setting per party.
    static Scenario make(std::vector<std::vector<Bloch>> settings);
    /// Every party measures the same directions.
    static Scenario uniform(int n, const std::vector<Bloch> &directions);

    int num_parties() const {
        return static_cast<int>(settings_.size());
    }
    int num_settings(int party) const {
        return static_cast<int>(settings_[party].size());
    }
    const std::vector<std::vector<Bloch>> &settings() const {
        return settings_;
    }
    const Bloch &direction(int party, int setting) const {
        return settings_[party][setting];
    }
    uint64_t num_setting_tuples() const;
    /// prod_k 2^{m_k}, saturating at UINT64_MAX.
    uint64_t num_strategies() const;
    /// Setting index of each party for tuple s.
    std::vector<int> setting_digits(uint64_t s) const;

   private:
    explicit Scenario(std::vector<std::vector<Bloch>> settings) : settings_(std::move(settings)) {
    }
    std::vector<std::vector<Bloch>> settings_;
};

/// Full probability table P(a|s); table[s * 2^n + a].
struct Behavior {
    Scenario scenario;
    std::vector<double> table;

    uint64_t num_outcomes() const {
        return uint64_t{1} << scenario.num_parties();
    }
    double probability(uint64_t s, uint64_t a) const {
        return table[s * num_outcomes() + a];
    }
};

/// P(a|s) = Tr(rho ⊗_k (I + a_k n_{k,s_k}·sigma)/2).
Behavior behavior(const LowRankState &state, const Scenario &scenario);

/// Largest deviation of any row sum from 1 and of any entry outside [0,1].
double normalization_error(const Behavior &b);
/// Largest dependence of any party subset's marginal on the other parties' settings.
double signaling_error(const Behavior &b);

/// w P + (1 - w) 2^{-n}.
Behavior mix_white_noise(const Behavior &b, double w);

/// Outcome (+1/-1) of `party` for `setting` under strategy `lambda`.
int strategy_outcome(const Scenario &scenario, uint64_t lambda, int party, int setting);
/// D_lambda(a|s) in {0, 1}.
double strategy_probability(const Scenario &scenario, uint64_t lambda, uint64_t s, uint64_t a);

/// A linear functional on behaviors, sum_{s,a} B(s,a) P(a|s) <= lhv_bound for
/// every local behavior. quantum_value is its value on the behavior it was
/// extracted from.
struct BellCertificate {
    std::vector<double> coefficients;  // indexed like Behavior::table
    double lhv_bound = 0;
    double quantum_value = 0;
};

double evaluate(const BellCertificate &cert, const Behavior &b);
/// max over deterministic strategies of the certificate, by enumeration.
double local_maximum(const BellCertificate &cert, const Scenario &scenario);

struct LPOptions {
    double tol = kDefaultLpTolerance;
    uint64_t column_cap = kDefaultColumnCap;
    double v_max = kMaxVisibility;
    /// Solve over implicit strategy columns priced by per-party ascent. Needed
    /// above column_cap; reported optimality is then heuristic.
    bool column_generation = false;
    lp::Options simplex;
};

struct LPResult {
    /// Critical visibility v*, clipped to [0, v_max].
    double visibility = 0;
    bool feasible_at_one = false;
    std::optional<BellCertificate> certificate;
    /// Nonzero q_lambda of the optimal local model for v* P + (1 - v*) noise.
    std::vector<std::pair<uint64_t, double>> strategy_weights;
    int iterations = 0;
    lp::Status status = lp::Status::NumericalFailure;
    bool pricing_exact = true;
    bool warm_started = false;
    /// Optimal basis, usable as a warm start for a nearby behavior.
    std::vector<size_t> basis;
    /// Optimal duals of the correlator rows (index 0 is the normalization row).
    std::vector<double> dual_functional;
};

/// Maximizes v such that v P + (1 - v) 2^{-n} is a mixture of deterministic
/// local strategies. Fails with ColumnCapExceeded above options.column_cap
/// strategies unless column generation is enabled, and with
/// SolverNumericalFailure if the simplex does not reach a verified optimum.
LPResult lp_membership(const Behavior &b, const LPOptions &options = {}, std::span<const size_t> warm_basis = {});

/// max |sum_lambda q_lambda D_lambda(a|s) / v* + (1 - 1/v*) 2^{-n} - P(a|s)|:
/// how well the recovered local model reproduces P itself.
double local_model_residual(const Behavior &b, const LPResult &result);

/// Checks value(P) > lhv_bound + tol and value(D_lambda) <= lhv_bound + tol
/// for every strategy (or `samples` seeded random strategies when there are
/// more than `exhaustive_cap`). Shape mismatches return false.
bool check_certificate(
    const BellCertificate &cert,
    const Behavior &b,
    double tol = kDefaultLpTolerance,
    uint64_t exhaustive_cap = kDefaultColumnCap,
    uint64_t samples = 10'000,
    uint64_t seed = 0);

/// Generalized correlators E(t) for t in prod_k {0..m_k}, t_k = 0 meaning
/// party k is traced out (its marginal is read at setting 0). This is an
/// invertible re-coordinatization of a no-signaling behavior.
std::vector<double> correlator_table(const Behavior &b);

/// The visibility LP expressed directly on generalized correlators.
LPResult lp_membership_correlators(
    const Scenario &scenario,
    std::span<const double> correlators,
    const LPOptions &options = {},
    std::span<const size_t> warm_basis = {});

}  // namespace multicorr
