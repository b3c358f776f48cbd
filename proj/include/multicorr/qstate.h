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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace multicorr {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;
using Matrix2 = Eigen::Matrix2cd;
using DenseOperator = Eigen::MatrixXcd;

inline constexpr int kQubitCap = 24;
inline constexpr int kDenseCap = 12;
inline constexpr double kNormTolerance = 1e-12;

// Qubit ordering used everywhere in the library: sites are numbered 0..n-1
// and site 0 is the most significant bit of a basis-state index, so
// |q0 q1 ... q(n-1)> has index q0*2^(n-1) + ... + q(n-1).
inline uint64_t site_bit(int n, int site) {
    return uint64_t{1} << (n - 1 - site);
}

/// Basis-index contribution of each assignment r of bits to `sites`, with
/// the first listed site taking the most significant bit of r.
std::vector<uint64_t> site_offsets(int n, std::span<const int> sites);

/// A normalized pure state of n qubits.
class StateVector {
   public:
    /// Fails with InvalidDimension unless 1 <= n <= kQubitCap and the amplitude
    /// count is 2^n; fails with InvalidArgument if the norm is off by more
    /// than kNormTolerance.
    static StateVector from_amplitudes(int n, Amplitudes amps);
    /// Rescales to unit norm. Fails on a (numerically) zero vector.
    static StateVector normalized(int n, Amplitudes amps);
    static StateVector basis_state(int n, uint64_t index);

    int num_qubits() const {
        return n_;
    }
    size_t dimension() const {
        return amps_.size();
    }
    const Amplitudes &amplitudes() const {
        return amps_;
    }
    Complex operator[](size_t index) const {
        return amps_[index];
    }

    /// <this|other>.
    Complex inner(const StateVector &other) const;
    double norm() const;
    /// this ⊗ rhs, with this state on the leading sites.
    StateVector tensor(const StateVector &rhs) const;

   private:
    StateVector(int n, Amplitudes amps) : n_(n), amps_(std::move(amps)) {
    }
    int n_;
    Amplitudes amps_;
};

struct WeightedState {
    double weight;
    StateVector vector;
};

/// A mixed state held as a convex combination of pure states. The density
/// matrix is never materialized except for small subsystems.
class LowRankState {
   public:
    /// Validates: weights nonnegative and summing to 1 within kNormTolerance,
    /// all vectors on the same number of qubits, at least one term.
    static LowRankState from_terms(std::vector<WeightedState> terms);
    static LowRankState pure(StateVector vector);

    int num_qubits() const {
        return n_;
    }
    size_t rank() const {
        return terms_.size();
    }
    const std::vector<WeightedState> &terms() const {
        return terms_;
    }

   private:
    explicit LowRankState(int n, std::vector<WeightedState> terms) : n_(n), terms_(std::move(terms)) {
    }
    int n_;
    std::vector<WeightedState> terms_;
};

/// (|0..01> + |0..10> + ... + |10..0>)/sqrt(n). Requires 2 <= n <= kQubitCap.
StateVector make_w(int n);
/// Bitwise complement of make_w(n): uniform superposition of weight n-1 basis states.
StateVector make_wbar(int n);
/// (|0..0> + |1..1>)/sqrt(2).
StateVector make_ghz(int n);
/// p|W><W| + (1-p)|Wbar><Wbar|. p of exactly 0 or 1 yields a single term.
LowRankState make_rho(int n, double p);
/// (|W> + sign|Wbar>)/sqrt(2), sign in {+1,-1}.
StateVector make_v(int n, int sign);
/// (|W>|0> + |Wbar>|1>)/sqrt(2) on n+1 qubits; the ancilla is the last site.
StateVector make_purification(int n);

/// sigma_x on every site.
StateVector flip_all(const StateVector &v);

/// Applies a 2x2 matrix to `site` of an n-qubit amplitude vector in place.
void apply_local(const Matrix2 &m, int site, int n, Amplitudes &amps);

bool is_hermitian(const DenseOperator &m, double tol = 1e-12);

/// Reduced density matrix on `keep` (distinct sites, any order). The reduced
/// index uses the kept sites in ascending order, lowest site most significant.
/// Fails with DenseLimitExceeded if |keep| > dense_cap.
DenseOperator partial_trace(const LowRankState &state, std::span<const int> keep, int dense_cap = kDenseCap);
DenseOperator partial_trace(const StateVector &state, std::span<const int> keep, int dense_cap = kDenseCap);

/// Full density matrix; same limits as partial_trace.
DenseOperator density_matrix(const LowRankState &state, int dense_cap = kDenseCap);

/// Tr(rho (X_0 ⊗ ... ⊗ X_{n-1})) for n local Hermitian factors, evaluated by
/// applying each factor to the rank vectors.
double expectation(const LowRankState &state, std::span<const Matrix2> factors);

}  // namespace multicorr
