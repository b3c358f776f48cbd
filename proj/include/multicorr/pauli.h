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

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multicorr/qstate.h"

namespace multicorr {

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Values with magnitude at or below this are classified as vanishing.
inline constexpr double kVanishingThreshold = 1e-12;
inline constexpr uint64_t kDefaultScanCap = 10'000'000;

Matrix2 pauli_matrix(Pauli p);

/// A tensor product of single-qubit Paulis, letter i acting on site i.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {
    }
    /// Parses a word over {I,X,Y,Z}; throws ParseError on anything else.
    static PauliString parse(std::string_view text);
    static PauliString identity(int n) {
        return PauliString(std::vector<Pauli>(n, Pauli::I));
    }

    int size() const {
        return static_cast<int>(letters_.size());
    }
    Pauli operator[](int site) const {
        return letters_[site];
    }
    const std::vector<Pauli> &letters() const {
        return letters_;
    }

    int weight() const;

    struct Counts {
        int x = 0;
        int y = 0;
        int z = 0;
    };
    Counts counts() const;

    std::string str() const;

    auto operator<=>(const PauliString &) const = default;

   private:
    std::vector<Pauli> letters_;
};

struct LocalObservable {
    int site;
    Matrix2 matrix;
};

struct CorrelationEntry {
    PauliString string;
    double value;
};

struct CorrelationReport {
    int n = 0;
    int weight = 0;
    uint64_t count = 0;
    double max_abs = 0;
    PauliString argmax;
    /// Empty when the scan ran with keep_entries = false.
    std::vector<CorrelationEntry> entries;
};

struct ScanOptions {
    uint64_t scan_cap = kDefaultScanCap;
    bool keep_entries = true;
};

StateVector apply_pauli_string(const PauliString &pauli, const StateVector &v);

/// Tr(rho P).
double correlator(const LowRankState &state, const PauliString &pauli);

/// True when the sigma_x^{⊗n} symmetry of the equal W/Wbar mixture forces
/// Tr(rho_p P) = 0: p == 1/2 and the number of Y plus Z letters is odd.
bool parity_predicts_zero(const PauliString &pauli, double p);

/// C(n, weight) * 3^weight, saturating at UINT64_MAX.
uint64_t count_strings(int n, int weight);

/// All Pauli strings with exactly `weight` non-identity letters, ordered by
/// site subset (lexicographic) and then by letter word (X < Y < Z).
std::vector<PauliString> strings_of_weight(int n, int weight);

/// Evaluates every weight-`weight` correlator of the state. Entries follow
/// strings_of_weight order and are identical for any worker count.
CorrelationReport correlation_tensor(const LowRankState &state, int weight, const ScanOptions &options = {});

/// Multiparty covariance of the listed observables (one per listed site; the
/// other sites are left out). With traceless_shift each X_j is replaced by
/// X_j - <X_j> I before taking the joint expectation.
double covariance(const LowRankState &state, std::span<const LocalObservable> observables, bool traceless_shift = true);

/// Projector onto basis states with exactly k ones.
class WeightProjector {
   public:
    WeightProjector(int n, int k);
    int n() const {
        return n_;
    }
    int k() const {
        return k_;
    }
    Amplitudes apply(std::span<const Complex> amps) const;
    Amplitudes apply(const StateVector &v) const {
        return apply(v.amplitudes());
    }

   private:
    int n_;
    int k_;
};

}  // namespace multicorr
