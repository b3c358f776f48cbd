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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multicorr/qstate.h"

namespace multicorr {

inline constexpr int kMaxBipartitionQubits = 20;

/// A split of sites {0..n-1} into side A and its complement. Canonical form
/// keeps site 0 on side A, so each unordered cut appears once.
struct Bipartition {
    int n = 0;
    uint32_t side_a = 0;  // bit s set <=> site s on side A

    /// Canonicalizes (complements if site 0 is not listed) and validates
    /// that both sides are nonempty.
    static Bipartition from_sites(int n, std::span<const int> side_a);

    std::vector<int> sites_a() const;
    std::vector<int> sites_b() const;
    /// 1-based display, e.g. "{1,3}|{2}".
    std::string str() const;

    bool operator==(const Bipartition &) const = default;
};

/// All 2^(n-1) - 1 canonical cuts, ordered by |A| and then lexicographically.
std::vector<Bipartition> enumerate_bipartitions(int n);

/// Sum of |negative eigenvalues| of the density matrix partially transposed
/// on side A of the cut.
double negativity(const LowRankState &state, const Bipartition &cut, int dense_cap = kDenseCap);
/// Same, transposing an explicit site list (either side of a cut).
double negativity(const LowRankState &state, std::span<const int> transposed_sites, int dense_cap = kDenseCap);

/// Schmidt coefficients (descending singular values of the A x B amplitude matrix).
std::vector<double> schmidt_coefficients(const StateVector &v, const Bipartition &cut);
int schmidt_rank(const StateVector &v, const Bipartition &cut, double tol = 1e-10);

struct SeesawOptions {
    int restarts = 50;
    int max_iter = 500;
    double tol = 1e-10;
    uint64_t seed = 0;
};

struct SeesawResult {
    Bipartition bipartition;
    /// max over restarts of ||P_S (phi ⊗ psi)||^2.
    double best_overlap = 0;
    int restarts = 0;
    int iterations_used = 0;
    bool converged = false;
    /// Every restart's overlap sequence was nondecreasing (up to 1e-12).
    bool monotone = true;
    /// Overlap after each half-step of the best restart.
    std::vector<double> trace;
    std::optional<StateVector> state_a;
    std::optional<StateVector> state_b;
};

/// Alternating maximization of the overlap between a product vector across
/// `cut` and span(subspace). The subspace vectors are orthonormalized first.
/// Restart i draws Haar-random starting states from seed + i.
SeesawResult seesaw_product_overlap(
    std::span<const StateVector> subspace, const Bipartition &cut, const SeesawOptions &options = {});

/// Seesaw against span{|W>, |Wbar>} on cut.n qubits.
SeesawResult seesaw_product_overlap(const Bipartition &cut, const SeesawOptions &options = {});

/// Numeric replay of the weight-projection argument: P_1 maps span{W, Wbar}
/// onto the line of |W>, P_{n-1} onto the line of |Wbar>, and neither |W>
/// nor |Wbar> has Schmidt rank 1 across the cut.
bool weight_argument_check(const Bipartition &cut, int dense_cap = kDenseCap);

struct CutReport {
    Bipartition cut;
    std::optional<double> negativity;
    std::optional<bool> weight_argument;
    SeesawResult seesaw;
};

struct EntanglementReport {
    int n = 0;
    double p = 0;
    std::vector<CutReport> cuts;
    double negativity_threshold = 1e-9;
    double overlap_margin = 1e-3;
    bool negativity_available = false;
    /// Every cut has negativity > threshold (when available) and a seesaw
    /// overlap below 1 - margin.
    bool genuine = false;
};

/// Entanglement evidence for rho_p on every cut. The seesaw runs against the
/// range of rho_p; negativity and the weight argument are skipped above
/// dense_cap qubits.
EntanglementReport genuine_entanglement_report(
    int n, double p, const SeesawOptions &options = {}, int dense_cap = kDenseCap);

}  // namespace multicorr
