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

#include "multicorr/qstate.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "multicorr/error.h"

namespace multicorr {

namespace {

void check_qubit_count(int n, int min_n) {
    if (n < min_n || n > kQubitCap) {
        fail(
            ErrorKind::InvalidDimension,
            "qubit count " + std::to_string(n) + " outside [" + std::to_string(min_n) + ", " +
                std::to_string(kQubitCap) + "]");
    }
}

double squared_norm(const Amplitudes &amps) {
    double total = 0;
    for (const auto &a : amps) {
        total += std::norm(a);
    }
    return total;
}

Amplitudes weight_superposition(int n, int weight) {
    Amplitudes amps(size_t{1} << n);
    double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (int site = 0; site < n; site++) {
        uint64_t index = site_bit(n, site);
        if (weight != 1) {
            index = ((uint64_t{1} << n) - 1) ^ index;
        }
        amps[index] = amp;
    }
    return amps;
}

std::vector<int> sorted_sites(std::span<const int> keep, int n) {
    std::vector<int> sites(keep.begin(), keep.end());
    std::sort(sites.begin(), sites.end());
    if (sites.empty()) {
        fail(ErrorKind::InvalidArgument, "partial trace needs at least one kept site");
    }
    if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
        fail(ErrorKind::InvalidArgument, "partial trace sites must be distinct");
    }
    if (sites.front() < 0 || sites.back() >= n) {
        fail(ErrorKind::DimensionMismatch, "kept site out of range for " + std::to_string(n) + " qubits");
    }
    return sites;
}

DenseOperator reduce(int n, const std::vector<WeightedState> &terms, std::span<const int> keep, int dense_cap) {
    std::vector<int> kept = sorted_sites(keep, n);
    if (static_cast<int>(kept.size()) > dense_cap) {
        fail(
            ErrorKind::DenseLimitExceeded,
            "reduced state on " + std::to_string(kept.size()) + " qubits exceeds dense cap " +
                std::to_string(dense_cap));
    }
    std::vector<int> traced;
    for (int s = 0; s < n; s++) {
        if (!std::binary_search(kept.begin(), kept.end(), s)) {
            traced.push_back(s);
        }
    }
    auto row_offsets = site_offsets(n, kept);
    auto col_offsets = site_offsets(n, traced);

    Eigen::Index rows = static_cast<Eigen::Index>(row_offsets.size());
    Eigen::Index cols = static_cast<Eigen::Index>(col_offsets.size());
    DenseOperator result = DenseOperator::Zero(rows, rows);
    Eigen::MatrixXcd block(rows, cols);
    for (const auto &term : terms) {
        const auto &amps = term.vector.amplitudes();
        for (Eigen::Index r = 0; r < rows; r++) {
            for (Eigen::Index c = 0; c < cols; c++) {
                block(r, c) = amps[row_offsets[r] | col_offsets[c]];
            }
        }
        result.noalias() += term.weight * (block * block.adjoint());
    }
    return result;
}

}  // namespace

std::vector<uint64_t> site_offsets(int n, std::span<const int> sites) {
    size_t k = sites.size();
    std::vector<uint64_t> offsets(size_t{1} << k);
    for (size_t r = 0; r < offsets.size(); r++) {
        uint64_t index = 0;
        for (size_t j = 0; j < k; j++) {
            if ((r >> (k - 1 - j)) & 1) {
                index |= site_bit(n, sites[j]);
            }
        }
        offsets[r] = index;
    }
    return offsets;
}

StateVector StateVector::from_amplitudes(int n, Amplitudes amps) {
    check_qubit_count(n, 1);
    if (amps.size() != (size_t{1} << n)) {
        fail(ErrorKind::InvalidDimension, "expected 2^" + std::to_string(n) + " amplitudes");
    }
    double norm2 = squared_norm(amps);
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
        fail(ErrorKind::InvalidArgument, "state is not normalized (squared norm " + std::to_string(norm2) + ")");
    }
    return StateVector(n, std::move(amps));
}

StateVector StateVector::normalized(int n, Amplitudes amps) {
    check_qubit_count(n, 1);
    if (amps.size() != (size_t{1} << n)) {
        fail(ErrorKind::InvalidDimension, "expected 2^" + std::to_string(n) + " amplitudes");
    }
    double norm = std::sqrt(squared_norm(amps));
    if (norm < 1e-300) {
        fail(ErrorKind::InvalidArgument, "cannot normalize a zero vector");
    }
    for (auto &a : amps) {
        a /= norm;
    }
    return StateVector(n, std::move(amps));
}

StateVector StateVector::basis_state(int n, uint64_t index) {
    check_qubit_count(n, 1);
    Amplitudes amps(size_t{1} << n);
    if (index >= amps.size()) {
        fail(ErrorKind::InvalidArgument, "basis index out of range");
    }
    amps[index] = 1.0;
    return StateVector(n, std::move(amps));
}

Complex StateVector::inner(const StateVector &other) const {
    if (other.n_ != n_) {
        fail(ErrorKind::DimensionMismatch, "inner product of states with different qubit counts");
    }
    Complex total = 0;
    for (size_t i = 0; i < amps_.size(); i++) {
        total += std::conj(amps_[i]) * other.amps_[i];
    }
    return total;
}

double StateVector::norm() const {
    return std::sqrt(squared_norm(amps_));
}

StateVector StateVector::tensor(const StateVector &rhs) const {
    check_qubit_count(n_ + rhs.n_, 1);
    Amplitudes amps;
    amps.reserve(amps_.size() * rhs.amps_.size());
    for (const auto &a : amps_) {
        for (const auto &b : rhs.amps_) {
            amps.push_back(a * b);
        }
    }
    return StateVector(n_ + rhs.n_, std::move(amps));
}

LowRankState LowRankState::from_terms(std::vector<WeightedState> terms) {
    if (terms.empty()) {
        fail(ErrorKind::InvalidArgument, "mixture needs at least one term");
    }
    int n = terms.front().vector.num_qubits();
    double total = 0;
    for (const auto &t : terms) {
        if (t.vector.num_qubits() != n) {
            fail(ErrorKind::DimensionMismatch, "mixture terms act on different qubit counts");
        }
        if (!(t.weight >= 0) || t.weight > 1) {
            fail(ErrorKind::InvalidProbability, "mixture weight " + std::to_string(t.weight) + " outside [0, 1]");
        }
        total += t.weight;
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        fail(ErrorKind::InvalidProbability, "mixture weights sum to " + std::to_string(total));
    }
    return LowRankState(n, std::move(terms));
}

LowRankState LowRankState::pure(StateVector vector) {
    int n = vector.num_qubits();
    std::vector<WeightedState> terms;
    terms.push_back({1.0, std::move(vector)});
    return LowRankState(n, std::move(terms));
}

StateVector make_w(int n) {
    check_qubit_count(n, 2);
    return StateVector::from_amplitudes(n, weight_superposition(n, 1));
}

StateVector make_wbar(int n) {
    check_qubit_count(n, 2);
    return StateVector::from_amplitudes(n, weight_superposition(n, n - 1));
}

StateVector make_ghz(int n) {
    check_qubit_count(n, 2);
    Amplitudes amps(size_t{1} << n);
    amps.front() = M_SQRT1_2;
    amps.back() = M_SQRT1_2;
    return StateVector::from_amplitudes(n, std::move(amps));
}

LowRankState make_rho(int n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        fail(ErrorKind::InvalidProbability, "mixing probability " + std::to_string(p) + " outside [0, 1]");
    }
    check_qubit_count(n, 2);
    if (p == 1.0) {
        return LowRankState::pure(make_w(n));
    }
    if (p == 0.0) {
        return LowRankState::pure(make_wbar(n));
    }
    std::vector<WeightedState> terms;
    terms.push_back({p, make_w(n)});
    terms.push_back({1.0 - p, make_wbar(n)});
    return LowRankState::from_terms(std::move(terms));
}

StateVector make_v(int n, int sign) {
    if (sign != 1 && sign != -1) {
        fail(ErrorKind::InvalidArgument, "sign must be +1 or -1");
    }
    StateVector w = make_w(n);
    StateVector wbar = make_wbar(n);
    Amplitudes amps(w.dimension());
    for (size_t i = 0; i < amps.size(); i++) {
        amps[i] = (w[i] + static_cast<double>(sign) * wbar[i]) * M_SQRT1_2;
    }
    return StateVector::normalized(n, std::move(amps));
}

StateVector make_purification(int n) {
    check_qubit_count(n, 2);
    check_qubit_count(n + 1, 3);
    StateVector w = make_w(n);
    StateVector wbar = make_wbar(n);
    Amplitudes amps(size_t{2} << n);
    for (size_t i = 0; i < w.dimension(); i++) {
        amps[2 * i] = w[i] * M_SQRT1_2;
        amps[2 * i + 1] = wbar[i] * M_SQRT1_2;
    }
    return StateVector::normalized(n + 1, std::move(amps));
}

StateVector flip_all(const StateVector &v) {
    const auto &src = v.amplitudes();
    size_t mask = src.size() - 1;
    Amplitudes amps(src.size());
    for (size_t i = 0; i < src.size(); i++) {
        amps[i ^ mask] = src[i];
    }
    return StateVector::from_amplitudes(v.num_qubits(), std::move(amps));
}

void apply_local(const Matrix2 &m, int site, int n, Amplitudes &amps) {
    if (site < 0 || site >= n || amps.size() != (size_t{1} << n)) {
        fail(ErrorKind::DimensionMismatch, "local operator does not fit the state");
    }
    uint64_t bit = site_bit(n, site);
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (i & bit) {
            continue;
        }
        Complex a0 = amps[i];
        Complex a1 = amps[i | bit];
        amps[i] = m(0, 0) * a0 + m(0, 1) * a1;
        amps[i | bit] = m(1, 0) * a0 + m(1, 1) * a1;
    }
}

bool is_hermitian(const DenseOperator &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return m.rows() == 0 || (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

DenseOperator partial_trace(const LowRankState &state, std::span<const int> keep, int dense_cap) {
    return reduce(state.num_qubits(), state.terms(), keep, dense_cap);
}

DenseOperator partial_trace(const StateVector &state, std::span<const int> keep, int dense_cap) {
    std::vector<WeightedState> terms{{1.0, state}};
    return reduce(state.num_qubits(), terms, keep, dense_cap);
}

DenseOperator density_matrix(const LowRankState &state, int dense_cap) {
    std::vector<int> all(state.num_qubits());
    for (int s = 0; s < state.num_qubits(); s++) {
        all[s] = s;
    }
    return partial_trace(state, all, dense_cap);
}

double expectation(const LowRankState &state, std::span<const Matrix2> factors) {
    int n = state.num_qubits();
    if (static_cast<int>(factors.size()) != n) {
        fail(ErrorKind::DimensionMismatch, "observable has " + std::to_string(factors.size()) + " factors for " +
                                               std::to_string(n) + " qubits");
    }
    for (const auto &f : factors) {
        if (!is_hermitian(f)) {
            fail(ErrorKind::NotHermitian, "local observable factor is not Hermitian");
        }
    }
    const Matrix2 identity = Matrix2::Identity();
    double total = 0;
    for (const auto &term : state.terms()) {
        Amplitudes work = term.vector.amplitudes();
        for (int site = 0; site < n; site++) {
            if (factors[site] != identity) {
                apply_local(factors[site], site, n, work);
            }
        }
        Complex value = 0;
        const auto &amps = term.vector.amplitudes();
        for (size_t i = 0; i < amps.size(); i++) {
            value += std::conj(amps[i]) * work[i];
        }
        total += term.weight * value.real();
    }
    return total;
}

}  // namespace multicorr
