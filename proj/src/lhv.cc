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

#include "multicorr/lhv.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "multicorr/error.h"
#include "multicorr/tensor.h"

namespace multicorr {

namespace {

uint64_t saturating_mul(uint64_t a, uint64_t b) {
    if (a != 0 && b > std::numeric_limits<uint64_t>::max() / a) {
        return std::numeric_limits<uint64_t>::max();
    }
    return a * b;
}

Matrix2 projector(const Bloch &dir, int outcome) {
    double a = outcome;
    Matrix2 p;
    p << 0.5 * (1 + a * dir[2]), 0.5 * a * Complex(dir[0], -dir[1]), 0.5 * a * Complex(dir[0], dir[1]),
        0.5 * (1 - a * dir[2]);
    return p;
}

// C_k[lambda, t]: 1 for t = 0, else the +-1 outcome of setting t-1.
Eigen::MatrixXd strategy_matrix(int m) {
    Eigen::MatrixXd c(1 << m, m + 1);
    for (int lambda = 0; lambda < (1 << m); lambda++) {
        c(lambda, 0) = 1;
        for (int j = 0; j < m; j++) {
            c(lambda, j + 1) = ((lambda >> j) & 1) ? -1.0 : 1.0;
        }
    }
    return c;
}

struct CorrelatorLayout {
    std::vector<int> m;
    std::vector<size_t> dims;  // m_k + 1
    size_t num_rows = 1;       // prod (m_k + 1)

    explicit CorrelatorLayout(const Scenario &scenario) {
        for (int k = 0; k < scenario.num_parties(); k++) {
            m.push_back(scenario.num_settings(k));
            dims.push_back(static_cast<size_t>(m.back()) + 1);
            num_rows *= dims.back();
        }
    }

    std::vector<int> digits(size_t t) const {
        std::vector<int> d(dims.size());
        for (size_t k = dims.size(); k-- > 0;) {
            d[k] = static_cast<int>(t % dims[k]);
            t /= dims[k];
        }
        return d;
    }
};

// Value sum_t g(t) a_lambda(t) for every strategy lambda.
std::vector<double> strategy_values(const CorrelatorLayout &layout, std::span<const double> g) {
    std::vector<double> tensor(g.begin(), g.end());
    std::vector<size_t> dims = layout.dims;
    for (size_t k = layout.m.size(); k-- > 0;) {
        tensor = mode_product(tensor, dims, k, strategy_matrix(layout.m[k]));
    }
    return tensor;
}

// Columns: every deterministic strategy, then v, then the slack of v <= v_max.
// Rows: one per generalized correlator t, then the v_max row.
class StrategyColumns : public lp::ColumnSource {
   public:
    StrategyColumns(const Scenario &scenario, std::span<const double> correlators, double v_max, bool implicit)
        : layout_(scenario),
          correlators_(correlators.begin(), correlators.end()),
          num_strategies_(scenario.num_strategies()),
          implicit_(implicit),
          rng_(0x5eed) {
        (void)v_max;
        for (int m : layout_.m) {
            matrices_.push_back(strategy_matrix(m));
            radix_.push_back(uint64_t{1} << m);
        }
    }

    size_t num_rows() const override {
        return layout_.num_rows + 1;
    }
    size_t num_columns() const override {
        return num_strategies_ + 2;
    }
    size_t v_column() const {
        return num_strategies_;
    }

    void column(size_t j, std::span<double> out) const override {
        size_t rows = layout_.num_rows;
        if (j == num_strategies_) {
            for (size_t t = 0; t < rows; t++) {
                out[t] = -(correlators_[t] - (t == 0 ? 1.0 : 0.0));
            }
            out[rows] = 1;
            return;
        }
        if (j == num_strategies_ + 1) {
            std::fill(out.begin(), out.end(), 0.0);
            out[rows] = 1;
            return;
        }
        auto words = strategy_words(j);
        for (size_t t = 0; t < rows; t++) {
            double v = 1;
            size_t rest = t;
            for (size_t k = layout_.dims.size(); k-- > 0;) {
                size_t tk = rest % layout_.dims[k];
                rest /= layout_.dims[k];
                if (tk != 0 && ((words[k] >> (tk - 1)) & 1)) {
                    v = -v;
                }
            }
            out[t] = v;
        }
        out[rows] = 0;
    }

    double cost(size_t j) const override {
        return j == num_strategies_ ? -1.0 : 0.0;
    }

    void products(std::span<const double> y, std::span<double> out) const override {
        auto values = strategy_values(layout_, y.first(layout_.num_rows));
        std::copy(values.begin(), values.end(), out.begin());
        tail_products(y, out[num_strategies_], out[num_strategies_ + 1]);
    }

    bool supports_full_pricing() const override {
        return !implicit_;
    }

    std::optional<size_t> search_entering(std::span<const double> y, bool phase_one, double tol) const override {
        double pv, ps;
        tail_products(y, pv, ps);
        double best_d = -tol;
        std::optional<size_t> best;
        double dv = (phase_one ? 0.0 : -1.0) - pv;
        if (dv < best_d) {
            best_d = dv;
            best = num_strategies_;
        }
        if (-ps < best_d) {
            best_d = -ps;
            best = num_strategies_ + 1;
        }
        auto [lambda, value] = ascend(y.first(layout_.num_rows));
        if (-value < best_d) {
            best = lambda;
        }
        return best;
    }

   private:
    void tail_products(std::span<const double> y, double &pv, double &ps) const {
        size_t rows = layout_.num_rows;
        pv = y[rows];
        for (size_t t = 0; t < rows; t++) {
            pv -= (correlators_[t] - (t == 0 ? 1.0 : 0.0)) * y[t];
        }
        ps = y[rows];
    }

    std::vector<uint64_t> strategy_words(uint64_t lambda) const {
        std::vector<uint64_t> words(radix_.size());
        for (size_t k = radix_.size(); k-- > 0;) {
            words[k] = lambda % radix_[k];
            lambda /= radix_[k];
        }
        return words;
    }

    uint64_t strategy_index(const std::vector<uint64_t> &words) const {
        uint64_t lambda = 0;
        for (size_t k = 0; k < words.size(); k++) {
            lambda = lambda * radix_[k] + words[k];
        }
        return lambda;
    }

    // Per-party best responses from several starting strategies; returns the
    // best strategy found and its value a_lambda^T y.
    std::pair<uint64_t, double> ascend(std::span<const double> y) const {
        size_t n = layout_.m.size();
        constexpr int kStarts = 12;
        double best_value = -std::numeric_limits<double>::infinity();
        std::vector<uint64_t> best_words(n, 0);
        for (int start = 0; start < kStarts; start++) {
            std::vector<uint64_t> words(n);
            if (start == 0) {
                words = last_best_;
                words.resize(n, 0);
            } else {
                for (size_t k = 0; k < n; k++) {
                    words[k] = rng_() % radix_[k];
                }
            }
            double value = -std::numeric_limits<double>::infinity();
            for (int sweep = 0; sweep < 50; sweep++) {
                bool changed = false;
                for (size_t k = 0; k < n; k++) {
                    std::vector<double> tensor(y.begin(), y.end());
                    std::vector<size_t> dims = layout_.dims;
                    for (size_t q = n; q-- > 0;) {
                        if (q == k) {
                            continue;
                        }
                        Eigen::MatrixXd row = matrices_[q].row(static_cast<Eigen::Index>(words[q]));
                        tensor = mode_product(tensor, dims, q, row);
                    }
                    // tensor now has length m_k + 1.
                    Eigen::Map<const Eigen::VectorXd> reduced(tensor.data(), static_cast<Eigen::Index>(tensor.size()));
                    Eigen::VectorXd scores = matrices_[k] * reduced;
                    Eigen::Index arg;
                    double v = scores.maxCoeff(&arg);
                    if (v > value + 1e-12 || static_cast<uint64_t>(arg) != words[k]) {
                        if (static_cast<uint64_t>(arg) != words[k] && v > value + 1e-12) {
                            changed = true;
                        }
                        if (v >= value) {
                            words[k] = static_cast<uint64_t>(arg);
                            value = v;
                        }
                    }
                }
                if (!changed) {
                    break;
                }
            }
            if (value > best_value) {
                best_value = value;
                best_words = words;
            }
        }
        last_best_ = best_words;
        return {strategy_index(best_words), best_value};
    }

    CorrelatorLayout layout_;
    std::vector<double> correlators_;
    uint64_t num_strategies_;
    bool implicit_;
    std::vector<Eigen::MatrixXd> matrices_;
    std::vector<uint64_t> radix_;
    mutable std::mt19937_64 rng_;
    mutable std::vector<uint64_t> last_best_;
};

// Indices of m + 1 single-party strategies whose rows of strategy_matrix(m)
// are linearly independent and have (1, 0, .., 0) in their conic hull, with
// the largest smallest weight among the examined subsets.
std::optional<std::vector<int>> party_crash_words(int m) {
    Eigen::MatrixXd c = strategy_matrix(m);
    int words = 1 << m;
    int size = m + 1;
    if (size > words) {
        return std::nullopt;
    }
    Eigen::VectorXd target = Eigen::VectorXd::Zero(size);
    target(0) = 1;
    std::vector<int> pick(static_cast<size_t>(size));
    for (int i = 0; i < size; i++) {
        pick[static_cast<size_t>(i)] = i;
    }
    std::optional<std::vector<int>> best;
    double best_min = -1;
    constexpr int kMaxSubsets = 20000;
    for (int examined = 0; examined < kMaxSubsets; examined++) {
        Eigen::MatrixXd basis(size, size);
        for (int i = 0; i < size; i++) {
            basis.col(i) = c.row(pick[static_cast<size_t>(i)]).transpose();
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
        if (lu.isInvertible() && lu.rcond() > 1e-10) {
            Eigen::VectorXd w = lu.solve(target);
            double low = w.minCoeff();
            if (low >= -1e-12 && low > best_min) {
                best_min = low;
                best = pick;
            }
        }
        // Next combination in lexicographic order.
        int i = size - 1;
        while (i >= 0 && pick[static_cast<size_t>(i)] == words - size + i) {
            i--;
        }
        if (i < 0) {
            break;
        }
        pick[static_cast<size_t>(i)]++;
        for (int k = i + 1; k < size; k++) {
            pick[static_cast<size_t>(k)] = pick[static_cast<size_t>(k - 1)] + 1;
        }
    }
    return best;
}

// Feasible starting basis at v = 0: the tensor products of per-party crash
// strategies, plus the slack of the visibility cap.
std::vector<size_t> crash_basis(const Scenario &scenario) {
    std::vector<std::vector<int>> per_party;
    for (int k = 0; k < scenario.num_parties(); k++) {
        auto words = party_crash_words(scenario.num_settings(k));
        if (!words) {
            return {};
        }
        per_party.push_back(*words);
    }
    std::vector<size_t> basis{0};
    for (int k = 0; k < scenario.num_parties(); k++) {
        std::vector<size_t> next;
        uint64_t radix = uint64_t{1} << scenario.num_settings(k);
        for (size_t prefix : basis) {
            for (int w : per_party[static_cast<size_t>(k)]) {
                next.push_back(prefix * radix + static_cast<size_t>(w));
            }
        }
        basis = std::move(next);
    }
    basis.push_back(scenario.num_strategies() + 1);
    return basis;
}

void require_same_shape(const Scenario &scenario, size_t table_size) {
    uint64_t expected = saturating_mul(scenario.num_setting_tuples(), uint64_t{1} << scenario.num_parties());
    if (table_size != expected) {
        fail(ErrorKind::DimensionMismatch, "table does not match the scenario shape");
    }
}

}  // namespace

Scenario Scenario::make(std::vector<std::vector<Bloch>> settings) {
    if (settings.empty() || settings.size() > 20) {
        fail(ErrorKind::InvalidDimension, "scenario needs between 1 and 20 parties");
    }
    for (const auto &party : settings) {
        if (party.empty()) {
            fail(ErrorKind::InvalidArgument, "every party needs at least one setting");
        }
        if (party.size() > 16) {
            fail(ErrorKind::InvalidArgument, "at most 16 settings per party");
        }
        for (const auto &d : party) {
            double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            if (!(std::abs(norm - 1.0) <= 1e-10)) {
                fail(ErrorKind::InvalidDirection, "measurement direction has norm " + std::to_string(norm));
            }
        }
    }
    return Scenario(std::move(settings));
}

Scenario Scenario::uniform(int n, const std::vector<Bloch> &directions) {
    return make(std::vector<std::vector<Bloch>>(static_cast<size_t>(std::max(n, 0)), directions));
}

uint64_t Scenario::num_setting_tuples() const {
    uint64_t total = 1;
    for (const auto &party : settings_) {
        total = saturating_mul(total, party.size());
    }
    return total;
}

uint64_t Scenario::num_strategies() const {
    uint64_t total = 1;
    for (const auto &party : settings_) {
        total = saturating_mul(total, uint64_t{1} << party.size());
    }
    return total;
}

std::vector<int> Scenario::setting_digits(uint64_t s) const {
    std::vector<int> d(settings_.size());
    for (size_t k = settings_.size(); k-- > 0;) {
        d[k] = static_cast<int>(s % settings_[k].size());
        s /= settings_[k].size();
    }
    return d;
}

Behavior behavior(const LowRankState &state, const Scenario &scenario) {
    int n = scenario.num_parties();
    if (n != state.num_qubits()) {
        fail(ErrorKind::DimensionMismatch, "scenario has " + std::to_string(n) + " parties for a " +
                                               std::to_string(state.num_qubits()) + "-qubit state");
    }
    uint64_t outcomes = uint64_t{1} << n;
    Behavior b{scenario, std::vector<double>(scenario.num_setting_tuples() * outcomes, 0.0)};

    // Depth-first over parties; level k holds the vector after projecting parties < k.
    std::vector<Amplitudes> levels(static_cast<size_t>(n) + 1);
    for (const auto &term : state.terms()) {
        levels[0] = term.vector.amplitudes();
        auto recurse = [&](auto &self, int k, uint64_t s, uint64_t a) -> void {
            if (k == n) {
                double norm2 = 0;
                for (const auto &x : levels[k]) {
                    norm2 += std::norm(x);
                }
                b.table[s * outcomes + a] += term.weight * norm2;
                return;
            }
            for (int j = 0; j < scenario.num_settings(k); j++) {
                for (int bit = 0; bit < 2; bit++) {
                    levels[k + 1] = levels[k];
                    apply_local(projector(scenario.direction(k, j), bit ? -1 : 1), k, n, levels[k + 1]);
                    self(self, k + 1, s * scenario.num_settings(k) + j, (a << 1) | bit);
                }
            }
        };
        recurse(recurse, 0, 0, 0);
    }
    return b;
}

double normalization_error(const Behavior &b) {
    uint64_t outcomes = b.num_outcomes();
    double worst = 0;
    for (uint64_t s = 0; s < b.scenario.num_setting_tuples(); s++) {
        double total = 0;
        for (uint64_t a = 0; a < outcomes; a++) {
            double p = b.probability(s, a);
            total += p;
            worst = std::max({worst, -p, p - 1.0});
        }
        worst = std::max(worst, std::abs(total - 1.0));
    }
    return worst;
}

double signaling_error(const Behavior &b) {
    const Scenario &sc = b.scenario;
    int n = sc.num_parties();
    uint64_t outcomes = b.num_outcomes();
    double worst = 0;
    for (uint32_t subset = 1; subset + 1 < (uint32_t{1} << n); subset++) {
        for (uint64_t s = 0; s < sc.num_setting_tuples(); s++) {
            // Reference tuple: same settings on the subset, setting 0 elsewhere.
            auto digits = sc.setting_digits(s);
            uint64_t ref = 0;
            for (int k = 0; k < n; k++) {
                bool in = (subset >> k) & 1;
                ref = ref * sc.num_settings(k) + (in ? digits[k] : 0);
            }
            if (ref == s) {
                continue;
            }
            std::vector<double> here(outcomes, 0.0), there(outcomes, 0.0);
            uint64_t keep = 0;
            for (int k = 0; k < n; k++) {
                if ((subset >> k) & 1) {
                    keep |= uint64_t{1} << (n - 1 - k);
                }
            }
            for (uint64_t a = 0; a < outcomes; a++) {
                here[a & keep] += b.probability(s, a);
                there[a & keep] += b.probability(ref, a);
            }
            for (uint64_t a = 0; a < outcomes; a++) {
                worst = std::max(worst, std::abs(here[a] - there[a]));
            }
        }
    }
    return worst;
}

Behavior mix_white_noise(const Behavior &b, double w) {
    if (!(w >= 0 && w <= 1)) {
        fail(ErrorKind::InvalidProbability, "mixing weight outside [0, 1]");
    }
    Behavior out = b;
    double noise = 1.0 / static_cast<double>(b.num_outcomes());
    for (auto &p : out.table) {
        p = w * p + (1 - w) * noise;
    }
    return out;
}

int strategy_outcome(const Scenario &scenario, uint64_t lambda, int party, int setting) {
    int n = scenario.num_parties();
    for (int k = n - 1; k > party; k--) {
        lambda >>= scenario.num_settings(k);
    }
    uint64_t word = lambda & ((uint64_t{1} << scenario.num_settings(party)) - 1);
    return ((word >> setting) & 1) ? -1 : 1;
}

double strategy_probability(const Scenario &scenario, uint64_t lambda, uint64_t s, uint64_t a) {
    int n = scenario.num_parties();
    auto digits = scenario.setting_digits(s);
    for (int k = 0; k < n; k++) {
        int outcome = strategy_outcome(scenario, lambda, k, digits[k]);
        int bit = (a >> (n - 1 - k)) & 1;
        if ((outcome == -1) != (bit == 1)) {
            return 0;
        }
    }
    return 1;
}

namespace {

// Outcome index produced by strategy lambda for every setting tuple.
std::vector<uint64_t> strategy_outcomes(const Scenario &sc, uint64_t lambda) {
    int n = sc.num_parties();
    std::vector<uint64_t> words(n);
    for (int k = n - 1; k >= 0; k--) {
        words[k] = lambda & ((uint64_t{1} << sc.num_settings(k)) - 1);
        lambda >>= sc.num_settings(k);
    }
    std::vector<uint64_t> result(sc.num_setting_tuples());
    for (uint64_t s = 0; s < result.size(); s++) {
        auto digits = sc.setting_digits(s);
        uint64_t a = 0;
        for (int k = 0; k < n; k++) {
            a = (a << 1) | ((words[k] >> digits[k]) & 1);
        }
        result[s] = a;
    }
    return result;
}

double strategy_value(const BellCertificate &cert, const Scenario &sc, uint64_t lambda) {
    uint64_t outcomes = uint64_t{1} << sc.num_parties();
    auto a = strategy_outcomes(sc, lambda);
    double total = 0;
    for (uint64_t s = 0; s < a.size(); s++) {
        total += cert.coefficients[s * outcomes + a[s]];
    }
    return total;
}

}  // namespace

double evaluate(const BellCertificate &cert, const Behavior &b) {
    if (cert.coefficients.size() != b.table.size()) {
        fail(ErrorKind::DimensionMismatch, "certificate and behavior shapes differ");
    }
    double total = 0;
    for (size_t i = 0; i < b.table.size(); i++) {
        total += cert.coefficients[i] * b.table[i];
    }
    return total;
}

double local_maximum(const BellCertificate &cert, const Scenario &scenario) {
    uint64_t count = scenario.num_strategies();
    if (count > kDefaultColumnCap * 64) {
        fail(ErrorKind::ColumnCapExceeded, "too many strategies to enumerate");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (uint64_t lambda = 0; lambda < count; lambda++) {
        best = std::max(best, strategy_value(cert, scenario, lambda));
    }
    return best;
}

std::vector<double> correlator_table(const Behavior &b) {
    const Scenario &sc = b.scenario;
    int n = sc.num_parties();
    CorrelatorLayout layout(sc);
    uint64_t outcomes = b.num_outcomes();
    std::vector<double> e(layout.num_rows);
    for (size_t t = 0; t < layout.num_rows; t++) {
        auto d = layout.digits(t);
        uint64_t s = 0;
        uint64_t mask = 0;
        for (int k = 0; k < n; k++) {
            s = s * sc.num_settings(k) + (d[k] ? d[k] - 1 : 0);
            if (d[k]) {
                mask |= uint64_t{1} << (n - 1 - k);
            }
        }
        double total = 0;
        for (uint64_t a = 0; a < outcomes; a++) {
            double p = b.probability(s, a);
            total += (std::popcount(a & mask) & 1) ? -p : p;
        }
        e[t] = total;
    }
    return e;
}

LPResult lp_membership_correlators(
    const Scenario &scenario,
    std::span<const double> correlators,
    const LPOptions &options,
    std::span<const size_t> warm_basis) {
    CorrelatorLayout layout(scenario);
    if (correlators.size() != layout.num_rows) {
        fail(ErrorKind::DimensionMismatch, "correlator table does not match the scenario");
    }
    uint64_t strategies = scenario.num_strategies();
    bool implicit = strategies > options.column_cap;
    if (implicit && !options.column_generation) {
        fail(
            ErrorKind::ColumnCapExceeded,
            std::to_string(strategies) + " deterministic strategies exceed the column cap of " +
                std::to_string(options.column_cap) + "; use fewer settings or enable column generation");
    }
    if (implicit && strategies > (uint64_t{1} << 40)) {
        fail(ErrorKind::ColumnCapExceeded, "strategy space too large even for column generation");
    }

    StrategyColumns source(scenario, correlators, options.v_max, implicit);
    std::vector<double> rhs(source.num_rows(), 0.0);
    rhs[0] = 1.0;
    rhs.back() = options.v_max;
    lp::Options simplex = options.simplex;
    simplex.heuristic_pricing = implicit;
    std::vector<size_t> start(warm_basis.begin(), warm_basis.end());
    if (start.empty()) {
        start = crash_basis(scenario);
    }
    lp::Solution sol = lp::solve(source, rhs, simplex, start);
    if (sol.status != lp::Status::Optimal) {
        fail(
            ErrorKind::SolverNumericalFailure,
            "simplex finished with status " + std::string(lp::status_name(sol.status)) + " after " +
                std::to_string(sol.iterations) + " iterations");
    }

    LPResult result;
    result.status = sol.status;
    result.iterations = sol.iterations;
    result.pricing_exact = !implicit;
    result.warm_started = sol.warm_started && !warm_basis.empty();
    result.basis = sol.basis;
    result.visibility = std::clamp(sol.value(source.v_column()), 0.0, options.v_max);
    result.feasible_at_one = result.visibility >= 1.0 - options.tol;
    result.dual_functional.assign(sol.duals.begin(), sol.duals.begin() + static_cast<std::ptrdiff_t>(layout.num_rows));
    for (size_t i = 0; i < sol.basis.size(); i++) {
        if (sol.basis[i] < strategies && sol.basic_values[i] > 1e-12) {
            result.strategy_weights.emplace_back(sol.basis[i], sol.basic_values[i]);
        }
    }
    std::sort(result.strategy_weights.begin(), result.strategy_weights.end());

    if (!result.feasible_at_one) {
        // Duals on the correlator rows give the functional G with
        // G(local) <= v* and G(P) = 1; rescale so max |coefficient| = 1.
        std::vector<double> g(layout.num_rows, 0.0);
        double scale = 0;
        for (size_t t = 1; t < layout.num_rows; t++) {
            g[t] = sol.duals[t];
            scale = std::max(scale, std::abs(g[t]));
        }
        if (scale > 0) {
            for (auto &x : g) {
                x /= scale;
            }
        }
        BellCertificate cert;
        cert.quantum_value = 0;
        for (size_t t = 1; t < layout.num_rows; t++) {
            cert.quantum_value += g[t] * correlators[t];
        }
        if (!implicit) {
            auto values = strategy_values(layout, g);
            cert.lhv_bound = *std::max_element(values.begin(), values.end());
        } else {
            cert.lhv_bound = scale > 0 ? result.visibility / scale : 0;
        }

        int n = scenario.num_parties();
        uint64_t outcomes = uint64_t{1} << n;
        cert.coefficients.assign(scenario.num_setting_tuples() * outcomes, 0.0);
        for (size_t t = 1; t < layout.num_rows; t++) {
            if (g[t] == 0) {
                continue;
            }
            auto d = layout.digits(t);
            uint64_t s = 0;
            uint64_t mask = 0;
            for (int k = 0; k < n; k++) {
                s = s * scenario.num_settings(k) + (d[k] ? d[k] - 1 : 0);
                if (d[k]) {
                    mask |= uint64_t{1} << (n - 1 - k);
                }
            }
            for (uint64_t a = 0; a < outcomes; a++) {
                cert.coefficients[s * outcomes + a] += (std::popcount(a & mask) & 1) ? -g[t] : g[t];
            }
        }
        result.certificate = std::move(cert);
    }
    return result;
}

LPResult lp_membership(const Behavior &b, const LPOptions &options, std::span<const size_t> warm_basis) {
    require_same_shape(b.scenario, b.table.size());
    auto correlators = correlator_table(b);
    LPResult result = lp_membership_correlators(b.scenario, correlators, options, warm_basis);
    if (result.certificate) {
        result.certificate->quantum_value = evaluate(*result.certificate, b);
    }
    return result;
}

double local_model_residual(const Behavior &b, const LPResult &result) {
    double v = result.visibility;
    if (!(v > 0)) {
        return std::numeric_limits<double>::infinity();
    }
    uint64_t outcomes = b.num_outcomes();
    std::vector<double> model(b.table.size(), 0.0);
    for (const auto &[lambda, q] : result.strategy_weights) {
        auto a = strategy_outcomes(b.scenario, lambda);
        for (uint64_t s = 0; s < a.size(); s++) {
            model[s * outcomes + a[s]] += q;
        }
    }
    double noise = 1.0 / static_cast<double>(outcomes);
    double worst = 0;
    for (size_t i = 0; i < model.size(); i++) {
        worst = std::max(worst, std::abs(model[i] / v + (1 - 1 / v) * noise - b.table[i]));
    }
    return worst;
}

bool check_certificate(
    const BellCertificate &cert,
    const Behavior &b,
    double tol,
    uint64_t exhaustive_cap,
    uint64_t samples,
    uint64_t seed) {
    if (cert.coefficients.size() != b.table.size()) {
        return false;
    }
    if (!(evaluate(cert, b) > cert.lhv_bound + tol)) {
        return false;
    }
    const Scenario &sc = b.scenario;
    uint64_t count = sc.num_strategies();
    if (count <= exhaustive_cap) {
        for (uint64_t lambda = 0; lambda < count; lambda++) {
            if (strategy_value(cert, sc, lambda) > cert.lhv_bound + tol) {
                return false;
            }
        }
        return true;
    }
    std::mt19937_64 rng(seed);
    for (uint64_t i = 0; i < samples; i++) {
        uint64_t lambda = 0;
        for (int k = 0; k < sc.num_parties(); k++) {
            lambda = (lambda << sc.num_settings(k)) | (rng() & ((uint64_t{1} << sc.num_settings(k)) - 1));
        }
        if (strategy_value(cert, sc, lambda) > cert.lhv_bound + tol) {
            return false;
        }
    }
    return true;
}

}  // namespace multicorr
