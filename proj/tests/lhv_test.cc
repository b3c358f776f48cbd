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
#include <functional>
#include <random>

#include "gtest/gtest.h"
#include "multicorr/error.h"
#include "oracle.h"

using namespace multicorr;

namespace {

void expect_kind(ErrorKind kind, const std::function<void()> &f) {
    try {
        f();
        FAIL() << "expected " << error_kind_name(kind);
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

constexpr Bloch kX{1, 0, 0};
constexpr Bloch kY{0, 1, 0};
constexpr Bloch kZ{0, 0, 1};

Bloch random_direction(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Bloch d{g(rng), g(rng), g(rng)};
    double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    return {d[0] / norm, d[1] / norm, d[2] / norm};
}

Scenario random_scenario(int n, int m, std::mt19937_64 &rng) {
    std::vector<std::vector<Bloch>> settings(n);
    for (auto &party : settings) {
        for (int j = 0; j < m; j++) {
            party.push_back(random_direction(rng));
        }
    }
    return Scenario::make(settings);
}

oracle::Mat dense_projector(const Bloch &d, int outcome) {
    oracle::Mat id = oracle::Mat::Identity(2, 2);
    oracle::Mat dot = d[0] * oracle::sigma('X') + d[1] * oracle::sigma('Y') + d[2] * oracle::sigma('Z');
    return 0.5 * (id + static_cast<double>(outcome) * dot);
}

// P(a|s) = Tr(rho (x)_k Pi_k) from dense Kronecker products.
std::vector<double> dense_behavior(const oracle::Mat &rho, const Scenario &sc) {
    int n = sc.num_parties();
    std::vector<double> table;
    for (uint64_t s = 0; s < sc.num_setting_tuples(); s++) {
        auto digits = sc.setting_digits(s);
        for (uint64_t a = 0; a < (uint64_t{1} << n); a++) {
            std::vector<oracle::Mat> factors;
            for (int k = 0; k < n; k++) {
                int bit = (a >> (n - 1 - k)) & 1;
                factors.push_back(dense_projector(sc.direction(k, digits[k]), bit ? -1 : 1));
            }
            table.push_back(oracle::expect(rho, oracle::kron_all(factors)));
        }
    }
    return table;
}

// Critical visibility for two parties with two settings each: the local
// polytope is cut out by the eight CHSH variants together with positivity.
double chsh_critical_visibility(const Behavior &b, double v_max) {
    auto corr = [&](int x, int y) {
        uint64_t s = static_cast<uint64_t>(x * 2 + y);
        return b.probability(s, 0) - b.probability(s, 1) - b.probability(s, 2) + b.probability(s, 3);
    };
    double best = v_max;
    for (int flip = 0; flip < 4; flip++) {
        double e[2][2];
        for (int x = 0; x < 2; x++) {
            for (int y = 0; y < 2; y++) {
                e[x][y] = corr(x, y);
            }
        }
        // Variant with the minus sign on the (x, y) = (flip / 2, flip % 2) term.
        double value = 0;
        for (int x = 0; x < 2; x++) {
            for (int y = 0; y < 2; y++) {
                value += (x * 2 + y == flip) ? -e[x][y] : e[x][y];
            }
        }
        for (double sign : {1.0, -1.0}) {
            if (sign * value > 1e-12) {
                best = std::min(best, 2.0 / (sign * value));
            }
        }
    }
    for (double p : b.table) {
        if (p < 0.25 - 1e-12) {
            best = std::min(best, 0.25 / (0.25 - p));
        }
    }
    return best;
}

double mermin_local_max_by_enumeration() {
    double best = -1e9;
    for (int mask = 0; mask < 64; mask++) {
        int o[3][2];
        for (int k = 0; k < 3; k++) {
            for (int j = 0; j < 2; j++) {
                o[k][j] = ((mask >> (2 * k + j)) & 1) ? -1 : 1;
            }
        }
        double v = o[0][0] * o[1][0] * o[2][0] - o[0][0] * o[1][1] * o[2][1] - o[0][1] * o[1][0] * o[2][1] -
                   o[0][1] * o[1][1] * o[2][0];
        best = std::max(best, v);
    }
    return best;
}

LowRankState ghz_state(int n) {
    return LowRankState::pure(make_ghz(n));
}

}  // namespace

TEST(lhv, scenario_validation) {
    expect_kind(ErrorKind::InvalidDirection, [] { Scenario::make({{{1, 0, 0.1}}}); });
    expect_kind(ErrorKind::InvalidDirection, [] { Scenario::make({{{0, 0, 0}}}); });
    expect_kind(ErrorKind::InvalidDimension, [] { Scenario::make({}); });
    auto sc = Scenario::uniform(3, {kX, kY});
    EXPECT_EQ(sc.num_setting_tuples(), 8u);
    EXPECT_EQ(sc.num_strategies(), 64u);
    EXPECT_EQ(sc.setting_digits(5), (std::vector<int>{1, 0, 1}));
    expect_kind(ErrorKind::DimensionMismatch, [&] { behavior(make_rho(4, 0.5), sc); });
}

TEST(lhv, product_state_along_z) {
    auto sc = Scenario::uniform(3, {kZ});
    auto b = behavior(LowRankState::pure(StateVector::basis_state(3, 0)), sc);
    ASSERT_EQ(b.table.size(), 8u);
    EXPECT_NEAR(b.table[0], 1.0, 1e-14);
    for (size_t a = 1; a < 8; a++) {
        EXPECT_NEAR(b.table[a], 0.0, 1e-14);
    }
    auto lp = lp_membership(b);
    EXPECT_TRUE(lp.feasible_at_one);
    EXPECT_FALSE(lp.certificate.has_value());
    EXPECT_LT(local_model_residual(b, lp), 1e-9);
}

TEST(lhv, behavior_matches_dense_oracle) {
    std::mt19937_64 rng(11);
    for (double p : {0.0, 0.3, 0.5, 1.0}) {
        auto sc = random_scenario(3, 2, rng);
        auto b = behavior(make_rho(3, p), sc);
        auto expected = dense_behavior(oracle::rho_p(3, p), sc);
        ASSERT_EQ(b.table.size(), expected.size());
        for (size_t i = 0; i < expected.size(); i++) {
            EXPECT_NEAR(b.table[i], expected[i], 1e-12);
        }
    }
}

TEST(lhv, flip_symmetry_of_balanced_mixture) {
    // Flipping every outcome and every z-component maps rho_{1/2} to itself.
    auto sc = Scenario::uniform(3, {kZ});
    auto b = behavior(make_rho(3, 0.5), sc);
    for (uint64_t a = 0; a < 8; a++) {
        EXPECT_NEAR(b.probability(0, a), b.probability(0, 7 - a), 1e-14);
    }
}

TEST(lhv, normalization_and_no_signaling) {
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 100; trial++) {
        int n = trial % 2 ? 5 : 3;
        int m = 1 + trial % 3;
        auto sc = random_scenario(n, m, rng);
        double p = std::uniform_real_distribution<double>(0, 1)(rng);
        auto b = behavior(make_rho(n, p), sc);
        EXPECT_LT(normalization_error(b), 1e-12);
        EXPECT_LT(signaling_error(b), 1e-12);
    }
}

TEST(lhv, signaling_detected) {
    auto sc = Scenario::uniform(2, {kZ, kX});
    Behavior b{sc, std::vector<double>(16, 0.0)};
    // Party 2's outcome copies party 1's setting.
    for (uint64_t s = 0; s < 4; s++) {
        int x = static_cast<int>(s / 2);
        b.table[s * 4 + static_cast<uint64_t>(x)] = 1.0;
    }
    EXPECT_LT(normalization_error(b), 1e-15);
    EXPECT_NEAR(signaling_error(b), 1.0, 1e-15);
}

TEST(lhv, strategy_helpers_consistent) {
    auto sc = Scenario::make({{kX, kY}, {kZ}, {kX, kY, kZ}});
    for (uint64_t lambda = 0; lambda < sc.num_strategies(); lambda++) {
        for (uint64_t s = 0; s < sc.num_setting_tuples(); s++) {
            double total = 0;
            for (uint64_t a = 0; a < 8; a++) {
                total += strategy_probability(sc, lambda, s, a);
            }
            EXPECT_EQ(total, 1.0);
        }
    }
    // lambda digits: party 0 slowest, bit j of a party word is setting j.
    uint64_t lambda = (0b10u << 4) | (0b1u << 3) | 0b011u;
    EXPECT_EQ(strategy_outcome(sc, lambda, 0, 0), 1);
    EXPECT_EQ(strategy_outcome(sc, lambda, 0, 1), -1);
    EXPECT_EQ(strategy_outcome(sc, lambda, 1, 0), -1);
    EXPECT_EQ(strategy_outcome(sc, lambda, 2, 0), -1);
    EXPECT_EQ(strategy_outcome(sc, lambda, 2, 1), -1);
    EXPECT_EQ(strategy_outcome(sc, lambda, 2, 2), 1);
}

TEST(lhv, ghz_critical_visibility_with_mermin_certificate) {
    auto sc = Scenario::uniform(3, {kX, kY});
    auto b = behavior(ghz_state(3), sc);
    auto lp = lp_membership(b);
    EXPECT_EQ(lp.status, lp::Status::Optimal);
    EXPECT_NEAR(lp.visibility, 0.5, 1e-9);
    EXPECT_FALSE(lp.feasible_at_one);
    ASSERT_TRUE(lp.certificate.has_value());
    const auto &cert = *lp.certificate;
    EXPECT_TRUE(check_certificate(cert, b));
    EXPECT_NEAR(local_maximum(cert, sc), cert.lhv_bound, 1e-9);
    EXPECT_NEAR(cert.quantum_value / cert.lhv_bound, 2.0, 1e-8);
    // Independent enumeration of the Mermin expression.
    EXPECT_EQ(mermin_local_max_by_enumeration(), 2.0);
    EXPECT_NEAR(cert.lhv_bound, 2.0, 1e-8);
    EXPECT_NEAR(cert.quantum_value, 4.0, 1e-8);
    EXPECT_LT(local_model_residual(b, lp), 1e-8);
}

TEST(lhv, certificate_rejections) {
    auto sc = Scenario::uniform(3, {kX, kY});
    auto ghz = behavior(ghz_state(3), sc);
    auto cert = *lp_membership(ghz).certificate;
    auto product = behavior(LowRankState::pure(StateVector::basis_state(3, 0)), sc);
    EXPECT_FALSE(check_certificate(cert, product));
    BellCertificate zero{std::vector<double>(ghz.table.size(), 0.0), 0.0, 0.0};
    EXPECT_FALSE(check_certificate(zero, ghz));
    BellCertificate wrong_bound = cert;
    wrong_bound.lhv_bound = 1.0;
    EXPECT_FALSE(check_certificate(wrong_bound, ghz));
    BellCertificate wrong_shape = cert;
    wrong_shape.coefficients.pop_back();
    EXPECT_FALSE(check_certificate(wrong_shape, ghz));
    // Sampling path agrees on a valid certificate.
    EXPECT_TRUE(check_certificate(cert, ghz, kDefaultLpTolerance, 8, 500, 3));
}

TEST(lhv, two_party_visibility_matches_chsh_oracle) {
    std::mt19937_64 rng(50);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; trial++) {
        Amplitudes amps(4);
        for (auto &x : amps) {
            x = Complex(g(rng), g(rng));
        }
        auto state = LowRankState::pure(StateVector::normalized(2, amps));
        auto sc = random_scenario(2, 2, rng);
        auto b = behavior(state, sc);
        auto lp = lp_membership(b);
        double expected = chsh_critical_visibility(b, kMaxVisibility);
        EXPECT_NEAR(lp.visibility, expected, 1e-7) << "trial " << trial;
        EXPECT_LT(local_model_residual(b, lp), 1e-7);
        if (lp.certificate) {
            EXPECT_TRUE(check_certificate(*lp.certificate, b));
        }
    }
}

TEST(lhv, visibility_scales_under_noise) {
    auto sc = Scenario::uniform(3, {kX, kY});
    auto b = behavior(ghz_state(3), sc);
    for (double w : {0.5, 0.8}) {
        auto noisy = mix_white_noise(b, w);
        auto lp = lp_membership(noisy);
        EXPECT_NEAR(lp.visibility, std::min(0.5 / w, kMaxVisibility), 1e-9);
        EXPECT_EQ(lp.feasible_at_one, 0.5 / w >= 1.0);
    }
    expect_kind(ErrorKind::InvalidProbability, [&] { mix_white_noise(b, 1.5); });
}

TEST(lhv, deterministic_and_warm_start) {
    std::mt19937_64 rng(4);
    auto sc = random_scenario(3, 2, rng);
    auto b = behavior(make_rho(3, 0.5), sc);
    auto first = lp_membership(b);
    auto second = lp_membership(b);
    EXPECT_EQ(first.visibility, second.visibility);
    EXPECT_EQ(first.basis, second.basis);
    EXPECT_EQ(first.strategy_weights, second.strategy_weights);
    auto warm = lp_membership(b, {}, first.basis);
    EXPECT_TRUE(warm.warm_started);
    EXPECT_NEAR(warm.visibility, first.visibility, 1e-9);
    EXPECT_LE(warm.iterations, first.iterations);
}

TEST(lhv, column_cap_and_generation) {
    auto sc = Scenario::uniform(3, {kX, kY});
    auto b = behavior(ghz_state(3), sc);
    LPOptions capped;
    capped.column_cap = 10;
    expect_kind(ErrorKind::ColumnCapExceeded, [&] { lp_membership(b, capped); });
    capped.column_generation = true;
    auto lp = lp_membership(b, capped);
    EXPECT_FALSE(lp.pricing_exact);
    EXPECT_NEAR(lp.visibility, 0.5, 1e-7);
    ASSERT_TRUE(lp.certificate.has_value());
    EXPECT_TRUE(check_certificate(*lp.certificate, b));
}

TEST(lhv, correlator_table_entries) {
    auto sc = Scenario::uniform(3, {kX, kY});
    auto e = correlator_table(behavior(ghz_state(3), sc));
    ASSERT_EQ(e.size(), 27u);
    EXPECT_NEAR(e[0], 1.0, 1e-14);
    // (X, X, X) is index 1 * 9 + 1 * 3 + 1.
    EXPECT_NEAR(e[13], 1.0, 1e-14);
    // (X, Y, Y) is index 1 * 9 + 2 * 3 + 2.
    EXPECT_NEAR(e[17], -1.0, 1e-14);
    // Single-site marginals vanish.
    EXPECT_NEAR(e[9], 0.0, 1e-14);
}
