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

#include <bit>
#include <cmath>
#include <limits>

#include "multicorr/error.h"
#include "multicorr/parallel.h"

namespace multicorr {

namespace {

struct PauliMasks {
    uint64_t flip = 0;   // sites carrying X or Y
    uint64_t phase = 0;  // sites carrying Y or Z
    int num_y = 0;
};

PauliMasks masks_of(const PauliString &pauli) {
    int n = pauli.size();
    PauliMasks m;
    for (int site = 0; site < n; site++) {
        uint64_t bit = site_bit(n, site);
        switch (pauli[site]) {
            case Pauli::I:
                break;
            case Pauli::X:
                m.flip |= bit;
                break;
            case Pauli::Y:
                m.flip |= bit;
                m.phase |= bit;
                m.num_y++;
                break;
            case Pauli::Z:
                m.phase |= bit;
                break;
        }
    }
    return m;
}

// i^k for integer k.
Complex i_power(int k) {
    switch (k & 3) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

// <psi|P|psi>, using P|b> = i^{#Y} (-1)^{popcount(b & phase)} |b ^ flip>.
Complex pauli_expectation(const Amplitudes &amps, const PauliMasks &m) {
    double re = 0;
    double im = 0;
    for (uint64_t b = 0; b < amps.size(); b++) {
        Complex t = std::conj(amps[b ^ m.flip]) * amps[b];
        if (std::popcount(b & m.phase) & 1) {
            re -= t.real();
            im -= t.imag();
        } else {
            re += t.real();
            im += t.imag();
        }
    }
    return i_power(m.num_y) * Complex(re, im);
}

void require_length(const PauliString &pauli, int n) {
    if (pauli.size() != n) {
        fail(
            ErrorKind::DimensionMismatch,
            "Pauli string of length " + std::to_string(pauli.size()) + " applied to " + std::to_string(n) + " qubits");
    }
}

std::vector<std::vector<int>> combinations(int n, int k) {
    std::vector<std::vector<int>> result;
    std::vector<int> current(k);
    for (int i = 0; i < k; i++) {
        current[i] = i;
    }
    while (true) {
        result.push_back(current);
        int i = k - 1;
        while (i >= 0 && current[i] == n - k + i) {
            i--;
        }
        if (i < 0) {
            break;
        }
        current[i]++;
        for (int j = i + 1; j < k; j++) {
            current[j] = current[j - 1] + 1;
        }
    }
    return result;
}

uint64_t pow3(int k) {
    uint64_t r = 1;
    for (int i = 0; i < k; i++) {
        r *= 3;
    }
    return r;
}

PauliString string_at(int n, const std::vector<int> &subset, uint64_t word) {
    std::vector<Pauli> letters(n, Pauli::I);
    int k = static_cast<int>(subset.size());
    for (int j = k - 1; j >= 0; j--) {
        letters[subset[j]] = static_cast<Pauli>(1 + word % 3);
        word /= 3;
    }
    return PauliString(std::move(letters));
}

}  // namespace

Matrix2 pauli_matrix(Pauli p) {
    Matrix2 m;
    switch (p) {
        case Pauli::I:
            m << 1, 0, 0, 1;
            break;
        case Pauli::X:
            m << 0, 1, 1, 0;
            break;
        case Pauli::Y:
            m << 0, Complex(0, -1), Complex(0, 1), 0;
            break;
        case Pauli::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<Pauli> letters;
    letters.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case 'I':
            case '_':
                letters.push_back(Pauli::I);
                break;
            case 'X':
                letters.push_back(Pauli::X);
                break;
            case 'Y':
                letters.push_back(Pauli::Y);
                break;
            case 'Z':
                letters.push_back(Pauli::Z);
                break;
            default:
                fail(ErrorKind::ParseError, "invalid Pauli letter '" + std::string(1, c) + "'");
        }
    }
    if (letters.empty()) {
        fail(ErrorKind::ParseError, "empty Pauli string");
    }
    return PauliString(std::move(letters));
}

int PauliString::weight() const {
    int w = 0;
    for (auto p : letters_) {
        w += p != Pauli::I;
    }
    return w;
}

PauliString::Counts PauliString::counts() const {
    Counts c;
    for (auto p : letters_) {
        c.x += p == Pauli::X;
        c.y += p == Pauli::Y;
        c.z += p == Pauli::Z;
    }
    return c;
}

std::string PauliString::str() const {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    std::string s;
    s.reserve(letters_.size());
    for (auto p : letters_) {
        s.push_back(kLetters[static_cast<int>(p)]);
    }
    return s;
}

StateVector apply_pauli_string(const PauliString &pauli, const StateVector &v) {
    require_length(pauli, v.num_qubits());
    PauliMasks m = masks_of(pauli);
    Complex global = i_power(m.num_y);
    const auto &src = v.amplitudes();
    Amplitudes out(src.size());
    for (uint64_t b = 0; b < src.size(); b++) {
        Complex a = global * src[b];
        out[b ^ m.flip] = (std::popcount(b & m.phase) & 1) ? -a : a;
    }
    return StateVector::normalized(v.num_qubits(), std::move(out));
}

double correlator(const LowRankState &state, const PauliString &pauli) {
    require_length(pauli, state.num_qubits());
    PauliMasks m = masks_of(pauli);
    double total = 0;
    for (const auto &term : state.terms()) {
        total += term.weight * pauli_expectation(term.vector.amplitudes(), m).real();
    }
    return total;
}

bool parity_predicts_zero(const PauliString &pauli, double p) {
    auto c = pauli.counts();
    return p == 0.5 && ((c.y + c.z) & 1) == 1;
}

uint64_t count_strings(int n, int weight) {
    if (weight < 0 || weight > n) {
        return 0;
    }
    // C(n, weight) computed incrementally; exact since each prefix is a binomial.
    long double binom = 1;
    for (int i = 1; i <= weight; i++) {
        binom = binom * (n - weight + i) / i;
    }
    long double total = std::round(binom) * static_cast<long double>(std::pow(3.0L, weight));
    if (total >= static_cast<long double>(std::numeric_limits<uint64_t>::max())) {
        return std::numeric_limits<uint64_t>::max();
    }
    return static_cast<uint64_t>(total);
}

std::vector<PauliString> strings_of_weight(int n, int weight) {
    if (n < 1 || weight < 0 || weight > n) {
        fail(ErrorKind::InvalidArgument, "weight " + std::to_string(weight) + " outside [0, " + std::to_string(n) + "]");
    }
    std::vector<PauliString> result;
    uint64_t words = pow3(weight);
    for (const auto &subset : combinations(n, weight)) {
        for (uint64_t w = 0; w < words; w++) {
            result.push_back(string_at(n, subset, w));
        }
    }
    return result;
}

CorrelationReport correlation_tensor(const LowRankState &state, int weight, const ScanOptions &options) {
    int n = state.num_qubits();
    if (weight < 1 || weight > n) {
        fail(ErrorKind::InvalidArgument, "weight " + std::to_string(weight) + " outside [1, " + std::to_string(n) + "]");
    }
    uint64_t count = count_strings(n, weight);
    if (count > options.scan_cap) {
        fail(
            ErrorKind::ScanTooLarge,
            std::to_string(count) + " strings exceed the scan cap of " + std::to_string(options.scan_cap));
    }

    auto subsets = combinations(n, weight);
    uint64_t words = pow3(weight);

    std::vector<double> values(options.keep_entries ? count : 0);
    constexpr size_t kChunk = 512;
    size_t num_chunks = (count + kChunk - 1) / kChunk;
    std::vector<double> chunk_max(num_chunks, -1.0);
    std::vector<uint64_t> chunk_arg(num_chunks, 0);

    parallel_chunks(count, kChunk, [&](size_t begin, size_t end) {
        size_t chunk = begin / kChunk;
        for (size_t idx = begin; idx < end; idx++) {
            PauliString p = string_at(n, subsets[idx / words], idx % words);
            double v = correlator(state, p);
            if (options.keep_entries) {
                values[idx] = v;
            }
            if (std::abs(v) > chunk_max[chunk]) {
                chunk_max[chunk] = std::abs(v);
                chunk_arg[chunk] = idx;
            }
        }
    });

    CorrelationReport report;
    report.n = n;
    report.weight = weight;
    report.count = count;
    double best = -1;
    uint64_t best_idx = 0;
    for (size_t c = 0; c < num_chunks; c++) {
        if (chunk_max[c] > best) {
            best = chunk_max[c];
            best_idx = chunk_arg[c];
        }
    }
    report.max_abs = best;
    report.argmax = string_at(n, subsets[best_idx / words], best_idx % words);
    if (options.keep_entries) {
        report.entries.reserve(count);
        for (uint64_t idx = 0; idx < count; idx++) {
            report.entries.push_back({string_at(n, subsets[idx / words], idx % words), values[idx]});
        }
    }
    return report;
}

double covariance(const LowRankState &state, std::span<const LocalObservable> observables, bool traceless_shift) {
    int n = state.num_qubits();
    if (observables.empty()) {
        fail(ErrorKind::InvalidArgument, "covariance needs at least one observable");
    }
    std::vector<Matrix2> factors(n, Matrix2::Identity());
    std::vector<bool> used(n, false);
    for (const auto &obs : observables) {
        if (obs.site < 0 || obs.site >= n) {
            fail(ErrorKind::DimensionMismatch, "observable site " + std::to_string(obs.site) + " out of range");
        }
        if (used[obs.site]) {
            fail(ErrorKind::InvalidArgument, "two observables on site " + std::to_string(obs.site));
        }
        if (!is_hermitian(obs.matrix)) {
            fail(ErrorKind::NotHermitian, "observable on site " + std::to_string(obs.site) + " is not Hermitian");
        }
        used[obs.site] = true;
        Matrix2 m = obs.matrix;
        if (traceless_shift) {
            int site = obs.site;
            DenseOperator marginal = partial_trace(state, std::span<const int>(&site, 1));
            double mean = (marginal * obs.matrix).trace().real();
            m -= mean * Matrix2::Identity();
        }
        factors[obs.site] = m;
    }
    return expectation(state, factors);
}

WeightProjector::WeightProjector(int n, int k) : n_(n), k_(k) {
    if (n < 1 || n > kQubitCap || k < 0 || k > n) {
        fail(ErrorKind::InvalidArgument, "weight projector P_" + std::to_string(k) + " on " + std::to_string(n) + " qubits");
    }
}

Amplitudes WeightProjector::apply(std::span<const Complex> amps) const {
    if (amps.size() != (size_t{1} << n_)) {
        fail(ErrorKind::DimensionMismatch, "weight projector applied to a vector of the wrong size");
    }
    Amplitudes out(amps.begin(), amps.end());
    for (uint64_t b = 0; b < out.size(); b++) {
        if (std::popcount(b) != k_) {
            out[b] = 0;
        }
    }
    return out;
}

}  // namespace multicorr
