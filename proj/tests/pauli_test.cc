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

#include "multicorr/pauli.h"

#include <functional>
#include <random>
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

StateVector random_state(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0, 1);
    Amplitudes a(size_t{1} << n);
    for (auto &x : a) {
        x = Complex(g(rng), g(rng));
    }
    return StateVector::normalized(n, a);
}

PauliString random_string(int n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> letter(0, 3);
    std::vector<Pauli> letters(n);
    for (auto &l : letters) {
        l = static_cast<Pauli>(letter(rng));
    }
    return PauliString(letters);
}

}  // namespace

TEST(pauli, parse_and_counts) {
    auto p = PauliString::parse("XIYZZ");
    EXPECT_EQ(p.size(), 5);
    EXPECT_EQ(p.weight(), 4);
    auto c = p.counts();
    EXPECT_EQ(c.x, 1);
    EXPECT_EQ(c.y, 1);
    EXPECT_EQ(c.z, 2);
    EXPECT_EQ(p.str(), "XIYZZ");
    expect_kind(ErrorKind::ParseError, [] { PauliString::parse("XQ"); });
    expect_kind(ErrorKind::ParseError, [] { PauliString::parse(""); });
}

TEST(pauli, apply_matches_dense_matrix) {
    std::mt19937_64 rng(3);
    for (int n : {1, 2, 3, 5}) {
        for (int trial = 0; trial < 20; trial++) {
            auto v = random_state(n, rng);
            auto p = random_string(n, rng);
            auto out = apply_pauli_string(p, v);
            oracle::Vec expected = oracle::pauli_dense(p.str()) * oracle::to_vec(v.amplitudes());
            for (size_t i = 0; i < out.dimension(); i++) {
                EXPECT_NEAR(std::abs(out[i] - expected(static_cast<Eigen::Index>(i))), 0, 1e-14);
            }
        }
    }
}

TEST(pauli, apply_examples) {
    auto w = make_w(3);
    auto xxx = apply_pauli_string(PauliString::parse("XXX"), w);
    EXPECT_NEAR(std::abs(xxx.inner(make_wbar(3)) - 1.0), 0, 1e-15);

    auto id = apply_pauli_string(PauliString::parse("III"), w);
    EXPECT_NEAR(std::abs(id.inner(w) - 1.0), 0, 1e-15);

    auto xyz = apply_pauli_string(PauliString::parse("XYZ"), w);
    oracle::Vec dense = oracle::pauli_dense("XYZ") * oracle::to_vec(w.amplitudes());
    Complex overlap = oracle::to_vec(w.amplitudes()).dot(dense);
    EXPECT_NEAR(std::abs(overlap), 0, 1e-12);
    EXPECT_NEAR(std::abs(xyz.inner(w)), 0, 1e-12);

    expect_kind(ErrorKind::DimensionMismatch, [&] { apply_pauli_string(PauliString::parse("XX"), w); });
}

TEST(pauli, correlator_examples) {
    auto rho = make_rho(3, 0.5);
    EXPECT_NEAR(correlator(rho, PauliString::parse("YYZ")), 0, 1e-15);

    double zzi = oracle::expect(oracle::rho_p(3, 0.5), oracle::pauli_dense("ZZI"));
    EXPECT_NEAR(zzi, -1.0 / 3, 1e-15);
    EXPECT_NEAR(correlator(rho, PauliString::parse("ZZI")), zzi, 1e-12);

    double zzzz = oracle::expect(oracle::rho_p(4, 0.5), oracle::pauli_dense("ZZZZ"));
    EXPECT_NEAR(zzzz, -1.0, 1e-15);
    EXPECT_NEAR(correlator(make_rho(4, 0.5), PauliString::parse("ZZZZ")), zzzz, 1e-12);

    expect_kind(ErrorKind::DimensionMismatch, [&] { correlator(rho, PauliString::parse("ZZ")); });
}

TEST(pauli, parity_predicate) {
    EXPECT_TRUE(parity_predicts_zero(PauliString::parse("YYZ"), 0.5));
    EXPECT_FALSE(parity_predicts_zero(PauliString::parse("ZZI"), 0.5));
    EXPECT_FALSE(parity_predicts_zero(PauliString::parse("YYZ"), 0.6));
    EXPECT_TRUE(parity_predicts_zero(PauliString::parse("XIY"), 0.5));
    EXPECT_FALSE(parity_predicts_zero(PauliString::parse("XXX"), 0.5));
}

TEST(pauli, parity_theorem_exhaustive) {
    for (int n : {3, 5}) {
        auto rho = make_rho(n, 0.5);
        int odd = 0;
        for (int w = 1; w <= n; w++) {
            for (const auto &p : strings_of_weight(n, w)) {
                auto c = p.counts();
                if ((c.y + c.z) % 2 == 1) {
                    odd++;
                    ASSERT_TRUE(parity_predicts_zero(p, 0.5)) << p.str();
                    ASSERT_LE(std::abs(correlator(rho, p)), kVanishingThreshold) << p.str();
                }
            }
        }
        EXPECT_GT(odd, 0);
    }
}

TEST(pauli, parity_theorem_sampled_n7) {
    auto rho = make_rho(7, 0.5);
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10000; trial++) {
        auto p = random_string(7, rng);
        if (parity_predicts_zero(p, 0.5)) {
            ASSERT_LE(std::abs(correlator(rho, p)), kVanishingThreshold) << p.str();
        }
    }
}

TEST(pauli, predicate_soundness_over_mixtures) {
    std::mt19937_64 rng(8);
    for (double p : {0.2, 0.5, 0.9}) {
        for (int n : {3, 4, 6}) {
            auto rho = make_rho(n, p);
            for (int trial = 0; trial < 500; trial++) {
                auto s = random_string(n, rng);
                if (parity_predicts_zero(s, p)) {
                    EXPECT_LE(std::abs(correlator(rho, s)), kVanishingThreshold);
                }
            }
        }
    }
}

TEST(pauli, strings_of_weight_order_and_count) {
    auto strings = strings_of_weight(3, 2);
    ASSERT_EQ(strings.size(), 27u);
    EXPECT_EQ(strings.front().str(), "XXI");
    EXPECT_EQ(strings[1].str(), "XYI");
    EXPECT_EQ(strings[9].str(), "XIX");
    EXPECT_EQ(strings.back().str(), "IZZ");
    std::set<PauliString> unique(strings.begin(), strings.end());
    EXPECT_EQ(unique.size(), 27u);
    for (int n = 1; n <= 7; n++) {
        for (int w = 0; w <= n; w++) {
            EXPECT_EQ(strings_of_weight(n, w).size(), count_strings(n, w));
        }
    }
    EXPECT_EQ(count_strings(20, 10), 184756ull * 59049ull);
}

TEST(pauli, vanishing_theorem_full_weight) {
    for (int n : {3, 5, 7}) {
        auto report = correlation_tensor(make_rho(n, 0.5), n);
        EXPECT_EQ(report.count, count_strings(n, n));
        EXPECT_EQ(report.entries.size(), report.count);
        EXPECT_LE(report.max_abs, kVanishingThreshold) << n;
    }
}

TEST(pauli, tensor_weight_two_n3) {
    auto report = correlation_tensor(make_rho(3, 0.5), 2);
    // Oracle: dense expectation over every weight-2 string.
    double best = 0;
    for (const auto &e : report.entries) {
        double dense = oracle::expect(oracle::rho_p(3, 0.5), oracle::pauli_dense(e.string.str()));
        EXPECT_NEAR(e.value, dense, 1e-12) << e.string.str();
        best = std::max(best, std::abs(dense));
    }
    EXPECT_NEAR(best, 2.0 / 3, 1e-12);
    EXPECT_NEAR(report.max_abs, 2.0 / 3, 1e-10);
    auto c = report.argmax.counts();
    EXPECT_TRUE(c.x == 2 || c.y == 2) << report.argmax.str();
}

TEST(pauli, tensor_pure_w) {
    auto report = correlation_tensor(make_rho(3, 1.0), 3);
    EXPECT_GE(report.max_abs, 1 - 1e-12);
    for (const auto &e : report.entries) {
        if (e.string.str() == "ZZZ") {
            EXPECT_NEAR(e.value, -1, 1e-12);
        }
    }
}

TEST(pauli, tensor_serial_and_parallel_identical) {
    auto rho = make_rho(7, 0.3);
    size_t saved = thread_count();
    set_thread_count(1);
    auto serial = correlation_tensor(rho, 5);
    set_thread_count(4);
    auto parallel = correlation_tensor(rho, 5);
    set_thread_count(saved);
    ASSERT_EQ(serial.entries.size(), parallel.entries.size());
    for (size_t i = 0; i < serial.entries.size(); i++) {
        ASSERT_EQ(serial.entries[i].string, parallel.entries[i].string);
        ASSERT_EQ(serial.entries[i].value, parallel.entries[i].value);
    }
    EXPECT_EQ(serial.max_abs, parallel.max_abs);
    EXPECT_EQ(serial.argmax, parallel.argmax);
}

TEST(pauli, tensor_limits) {
    auto rho = make_rho(12, 0.5);
    ScanOptions options;
    options.scan_cap = 1000;
    expect_kind(ErrorKind::ScanTooLarge, [&] { correlation_tensor(rho, 12, options); });
    expect_kind(ErrorKind::InvalidArgument, [&] { correlation_tensor(rho, 0); });
    expect_kind(ErrorKind::InvalidArgument, [&] { correlation_tensor(rho, 13); });

    options.scan_cap = kDefaultScanCap;
    options.keep_entries = false;
    auto summary = correlation_tensor(make_rho(5, 0.5), 2, options);
    EXPECT_TRUE(summary.entries.empty());
    EXPECT_EQ(summary.count, 90u);
    EXPECT_GT(summary.max_abs, 0.1);
}

TEST(pauli, covariance_of_non_traceless_observables_vanishes) {
    auto rho = make_rho(3, 0.5);
    std::mt19937_64 rng(1234);
    for (int draw = 0; draw < 100; draw++) {
        std::vector<LocalObservable> obs;
        for (int site = 0; site < 3; site++) {
            obs.push_back({site, oracle::random_hermitian(rng)});
        }
        EXPECT_LE(std::abs(covariance(rho, obs)), 1e-10);
    }
}

TEST(pauli, covariance_of_product_state_vanishes) {
    auto state = LowRankState::pure(StateVector::basis_state(3, 0));
    std::mt19937_64 rng(4);
    for (int draw = 0; draw < 20; draw++) {
        std::vector<LocalObservable> obs;
        for (int site = 0; site < 3; site++) {
            obs.push_back({site, oracle::random_hermitian(rng)});
        }
        EXPECT_NEAR(covariance(state, obs), 0, 1e-12);
    }
}

TEST(pauli, bipartite_covariance_equals_correlator) {
    auto rho = make_rho(3, 0.5);
    Matrix2 z = pauli_matrix(Pauli::Z);
    std::vector<LocalObservable> obs{{0, z}, {1, z}};
    double dense = oracle::expect(oracle::rho_p(3, 0.5), oracle::pauli_dense("ZZI"));
    EXPECT_NEAR(covariance(rho, obs), dense, 1e-12);
    EXPECT_NEAR(covariance(rho, obs), -1.0 / 3, 1e-12);
}

TEST(pauli, traceless_covariance_equals_correlator) {
    auto rho = make_rho(5, 0.5);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; trial++) {
        auto p = random_string(5, rng);
        std::vector<LocalObservable> obs;
        for (int site = 0; site < 5; site++) {
            obs.push_back({site, pauli_matrix(p[site])});
        }
        // Identity factors are not traceless; only compare fully traceless strings.
        if (p.weight() == 5) {
            EXPECT_NEAR(covariance(rho, obs), correlator(rho, p), 1e-12);
        }
        std::vector<LocalObservable> traceless;
        for (int site = 0; site < 5; site++) {
            if (p[site] != Pauli::I) {
                traceless.push_back({site, pauli_matrix(p[site])});
            }
        }
        if (!traceless.empty()) {
            EXPECT_NEAR(covariance(rho, traceless), correlator(rho, p), 1e-12) << p.str();
        }
    }
}

TEST(pauli, covariance_errors) {
    auto rho = make_rho(3, 0.5);
    Matrix2 bad;
    bad << 1, 1, 0, 1;
    std::vector<LocalObservable> nonherm{{0, bad}};
    expect_kind(ErrorKind::NotHermitian, [&] { covariance(rho, nonherm); });
    std::vector<LocalObservable> out_of_range{{3, Matrix2::Identity()}};
    expect_kind(ErrorKind::DimensionMismatch, [&] { covariance(rho, out_of_range); });
    std::vector<LocalObservable> duplicate{{0, Matrix2::Identity()}, {0, Matrix2::Identity()}};
    expect_kind(ErrorKind::InvalidArgument, [&] { covariance(rho, duplicate); });
}

TEST(pauli, weight_projector_examples) {
    WeightProjector p1(3, 1);
    auto projected = p1.apply(make_v(3, 1));
    auto w = make_w(3);
    for (size_t i = 0; i < w.dimension(); i++) {
        EXPECT_NEAR(std::abs(projected[i] - w[i] * M_SQRT1_2), 0, 1e-15);
    }

    WeightProjector p0(3, 0);
    for (const auto &a : p0.apply(w)) {
        EXPECT_EQ(a, Complex(0));
    }

    // Weight-1 on sites {0,1} tensored with weight-1 on site {2,3}: total weight 2.
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0, 1);
    Amplitudes a(4), b(4);
    a[1] = Complex(g(rng), g(rng));
    a[2] = Complex(g(rng), g(rng));
    b[1] = Complex(g(rng), g(rng));
    b[2] = Complex(g(rng), g(rng));
    auto prod = StateVector::normalized(2, a).tensor(StateVector::normalized(2, b));
    auto kept = WeightProjector(4, 2).apply(prod);
    for (size_t i = 0; i < prod.dimension(); i++) {
        EXPECT_EQ(kept[i], prod[i]);
    }

    expect_kind(ErrorKind::InvalidArgument, [] { WeightProjector(3, 4); });
    expect_kind(ErrorKind::InvalidArgument, [] { WeightProjector(3, -1); });
}

TEST(pauli, weight_projector_algebra) {
    std::mt19937_64 rng(100);
    int n = 6;
    for (int trial = 0; trial < 100; trial++) {
        auto v = random_state(n, rng);
        Amplitudes sum(v.dimension());
        for (int k = 0; k <= n; k++) {
            WeightProjector pk(n, k);
            auto once = pk.apply(v);
            auto twice = pk.apply(once);
            for (size_t i = 0; i < sum.size(); i++) {
                sum[i] += once[i];
                ASSERT_NEAR(std::abs(once[i] - twice[i]), 0, 1e-12);
            }
            for (int j = 0; j <= n; j++) {
                if (j == k) {
                    continue;
                }
                auto cross = WeightProjector(n, j).apply(once);
                for (const auto &c : cross) {
                    ASSERT_NEAR(std::abs(c), 0, 1e-12);
                }
            }
        }
        for (size_t i = 0; i < sum.size(); i++) {
            ASSERT_NEAR(std::abs(sum[i] - v[i]), 0, 1e-12);
        }
    }
}
