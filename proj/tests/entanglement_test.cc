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

#include "multicorr/entanglement.h"

#include <functional>
#include <set>

#include "gtest/gtest.h"
#include "multicorr/error.h"
#include "multicorr/parallel.h"
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

// Dense partial-transpose eigenvalue oracle value for rho_{1/2}, n = 3 (any
// cut), computed once with an independent numpy script and frozen here.
constexpr double kNegativityRhoHalfN3 = 0.24401693585629247;

// Maximum product overlap with span{W, Wbar}, frozen from an independent
// BFGS search over unnormalized complex product vectors (200 restarts).
constexpr double kMaxOverlapN3 = 5.0 / 6.0;
constexpr double kMaxOverlapN5TwoThree = 3.0 / 5.0;
constexpr double kMaxOverlapN5OneFour = 4.0 / 5.0;

}  // namespace

TEST(entanglement, enumerate_bipartitions) {
    auto cuts = enumerate_bipartitions(3);
    ASSERT_EQ(cuts.size(), 3u);
    EXPECT_EQ(cuts[0].str(), "{1}|{2,3}");
    EXPECT_EQ(cuts[1].str(), "{1,2}|{3}");
    EXPECT_EQ(cuts[2].str(), "{1,3}|{2}");
    EXPECT_EQ(enumerate_bipartitions(2).size(), 1u);
    for (int n = 2; n <= 12; n++) {
        auto all = enumerate_bipartitions(n);
        EXPECT_EQ(all.size(), (size_t{1} << (n - 1)) - 1);
        std::set<uint32_t> masks;
        for (const auto &c : all) {
            EXPECT_TRUE(c.side_a & 1);
            masks.insert(c.side_a);
        }
        EXPECT_EQ(masks.size(), all.size());
    }
    EXPECT_EQ(enumerate_bipartitions(5).size(), 15u);
    expect_kind(ErrorKind::InvalidDimension, [] { enumerate_bipartitions(1); });
    expect_kind(ErrorKind::InvalidDimension, [] { enumerate_bipartitions(21); });
}

TEST(entanglement, bipartition_canonical_form) {
    std::vector<int> b{1, 2};
    auto cut = Bipartition::from_sites(3, b);
    EXPECT_EQ(cut.str(), "{1}|{2,3}");
    expect_kind(ErrorKind::InvalidArgument, [] { Bipartition::from_sites(3, std::vector<int>{0, 1, 2}); });
    expect_kind(ErrorKind::InvalidArgument, [] { Bipartition::from_sites(3, std::vector<int>{}); });
}

TEST(entanglement, negativity_rho_half_n3) {
    auto rho = make_rho(3, 0.5);
    for (const auto &cut : enumerate_bipartitions(3)) {
        double value = negativity(rho, cut);
        double dense = oracle::negativity(oracle::rho_p(3, 0.5), 3, cut.sites_a());
        EXPECT_NEAR(value, dense, 1e-12);
        EXPECT_NEAR(value, kNegativityRhoHalfN3, 1e-12) << cut.str();
        EXPECT_GT(value, 0);
    }
}

TEST(entanglement, negativity_product_state_is_zero) {
    auto state = LowRankState::pure(StateVector::basis_state(3, 0));
    for (const auto &cut : enumerate_bipartitions(3)) {
        EXPECT_NEAR(negativity(state, cut), 0, 1e-12);
    }
}

TEST(entanglement, negativity_pure_w) {
    auto w = LowRankState::pure(make_w(3));
    auto cut = Bipartition::from_sites(3, std::vector<int>{0});
    // Schmidt probabilities 1/3, 2/3 give negativity sqrt(1/3 * 2/3).
    EXPECT_NEAR(negativity(w, cut), std::sqrt(2.0) / 3, 1e-12);
    auto coeffs = schmidt_coefficients(make_w(3), cut);
    ASSERT_GE(coeffs.size(), 2u);
    EXPECT_NEAR(coeffs[0] * coeffs[0], 2.0 / 3, 1e-12);
    EXPECT_NEAR(coeffs[1] * coeffs[1], 1.0 / 3, 1e-12);
    EXPECT_NEAR(coeffs[0] * coeffs[1], std::sqrt(2.0) / 3, 1e-12);
}

TEST(entanglement, negativity_symmetric_under_complement) {
    for (int n : {3, 4, 5}) {
        for (double p : {0.3, 0.5, 1.0}) {
            auto rho = make_rho(n, p);
            for (const auto &cut : enumerate_bipartitions(n)) {
                EXPECT_NEAR(negativity(rho, cut.sites_a()), negativity(rho, cut.sites_b()), 1e-10);
            }
        }
    }
}

TEST(entanglement, negativity_dense_limit) {
    auto rho = make_rho(13, 0.5);
    auto cut = enumerate_bipartitions(13).front();
    expect_kind(ErrorKind::DenseLimitExceeded, [&] { negativity(rho, cut); });
}

TEST(entanglement, schmidt_rank_of_w) {
    auto cut = Bipartition::from_sites(3, std::vector<int>{0});
    // Oracle: singular values of the explicit 2 x 4 amplitude matrix.
    auto amps = oracle::w_amps(3, false);
    oracle::Mat m(2, 4);
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 4; b++) {
            m(a, b) = amps[a * 4 + b];
        }
    }
    Eigen::JacobiSVD<oracle::Mat> svd(m);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); i++) {
        rank += svd.singularValues()(i) > 1e-10;
    }
    EXPECT_EQ(rank, 2);
    EXPECT_EQ(schmidt_rank(make_w(3), cut), 2);
    EXPECT_EQ(schmidt_rank(StateVector::basis_state(3, 5), cut), 1);
}

TEST(entanglement, weight_argument_holds_on_all_cuts) {
    for (int n : {3, 5, 7}) {
        for (const auto &cut : enumerate_bipartitions(n)) {
            EXPECT_TRUE(weight_argument_check(cut)) << n << " " << cut.str();
        }
    }
    expect_kind(ErrorKind::DenseLimitExceeded, [] { weight_argument_check(enumerate_bipartitions(13).front()); });
}

TEST(entanglement, seesaw_bounded_below_one_n3) {
    SeesawOptions options;
    options.restarts = 50;
    options.seed = 1;
    for (const auto &cut : enumerate_bipartitions(3)) {
        auto r = seesaw_product_overlap(cut, options);
        EXPECT_LT(r.best_overlap, 1 - 1e-3);
        EXPECT_NEAR(r.best_overlap, kMaxOverlapN3, 1e-8) << cut.str();
        EXPECT_TRUE(r.monotone);
        EXPECT_TRUE(r.converged);
        EXPECT_EQ(r.restarts, 50);
        ASSERT_TRUE(r.state_a.has_value());
        // The returned product vector realizes the reported overlap.
        auto prod = r.state_a->tensor(*r.state_b);
        auto w = oracle::to_vec(make_w(3).amplitudes());
        auto wb = oracle::to_vec(make_wbar(3).amplitudes());
        // Reorder the product amplitudes from (A, B) order into site order.
        auto rows = site_offsets(3, cut.sites_a());
        auto cols = site_offsets(3, cut.sites_b());
        oracle::Vec v = oracle::Vec::Zero(8);
        for (size_t a = 0; a < rows.size(); a++) {
            for (size_t b = 0; b < cols.size(); b++) {
                v(static_cast<Eigen::Index>(rows[a] | cols[b])) = prod[a * cols.size() + b];
            }
        }
        double direct = std::norm(w.dot(v)) + std::norm(wb.dot(v));
        EXPECT_NEAR(direct, r.best_overlap, 1e-9);
    }
}

TEST(entanglement, seesaw_bounded_below_one_n5) {
    SeesawOptions options;
    options.restarts = 50;
    options.seed = 3;
    auto r = seesaw_product_overlap(Bipartition::from_sites(5, std::vector<int>{0, 1}), options);
    EXPECT_LT(r.best_overlap, 1 - 1e-3);
    EXPECT_NEAR(r.best_overlap, kMaxOverlapN5TwoThree, 1e-8);
    auto r1 = seesaw_product_overlap(Bipartition::from_sites(5, std::vector<int>{0}), options);
    EXPECT_NEAR(r1.best_overlap, kMaxOverlapN5OneFour, 1e-8);
}

TEST(entanglement, seesaw_finds_product_vector_in_validation_subspace) {
    std::vector<StateVector> subspace{StateVector::basis_state(3, 0), StateVector::basis_state(3, 7)};
    SeesawOptions options;
    options.restarts = 5;
    auto r = seesaw_product_overlap(subspace, Bipartition::from_sites(3, std::vector<int>{0}), options);
    EXPECT_NEAR(r.best_overlap, 1.0, 1e-9);
    EXPECT_TRUE(r.monotone);
}

TEST(entanglement, seesaw_trace_is_monotone) {
    SeesawOptions options;
    options.restarts = 3;
    options.seed = 42;
    auto r = seesaw_product_overlap(Bipartition::from_sites(5, std::vector<int>{0, 2}), options);
    ASSERT_GE(r.trace.size(), 3u);
    for (size_t i = 1; i < r.trace.size(); i++) {
        EXPECT_GE(r.trace[i], r.trace[i - 1] - 1e-12);
    }
    EXPECT_GE(r.best_overlap, 0);
    EXPECT_LE(r.best_overlap, 1);
}

TEST(entanglement, seesaw_is_deterministic) {
    SeesawOptions options;
    options.restarts = 8;
    options.seed = 17;
    auto cut = Bipartition::from_sites(5, std::vector<int>{0, 3});
    size_t saved = thread_count();
    set_thread_count(1);
    auto a = seesaw_product_overlap(cut, options);
    set_thread_count(3);
    auto b = seesaw_product_overlap(cut, options);
    set_thread_count(saved);
    EXPECT_EQ(a.best_overlap, b.best_overlap);
    EXPECT_EQ(a.iterations_used, b.iterations_used);
    EXPECT_EQ(a.trace, b.trace);
}

TEST(entanglement, genuine_report) {
    SeesawOptions options;
    options.restarts = 20;
    options.seed = 7;
    auto r3 = genuine_entanglement_report(3, 0.5, options);
    EXPECT_TRUE(r3.genuine);
    EXPECT_EQ(r3.cuts.size(), 3u);
    for (const auto &c : r3.cuts) {
        ASSERT_TRUE(c.negativity.has_value());
        EXPECT_GT(*c.negativity, 1e-9);
        EXPECT_TRUE(c.weight_argument.value_or(false));
    }
    auto r5 = genuine_entanglement_report(5, 0.5, options);
    EXPECT_TRUE(r5.genuine);
    EXPECT_EQ(r5.cuts.size(), 15u);
    auto pure = genuine_entanglement_report(3, 1.0, options);
    EXPECT_TRUE(pure.genuine);
}

TEST(entanglement, report_edge_cases) {
    // Two qubits at p = 1/2: rho is the pure W(2) Bell state, still entangled.
    SeesawOptions options;
    options.restarts = 5;
    auto r2 = genuine_entanglement_report(2, 0.5, options);
    EXPECT_TRUE(r2.genuine);
    expect_kind(ErrorKind::InvalidProbability, [] { genuine_entanglement_report(3, 2.0); });
}
