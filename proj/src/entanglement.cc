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

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "multicorr/error.h"
#include "multicorr/parallel.h"
#include "multicorr/pauli.h"

namespace multicorr {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

void check_cut_size(int n) {
    if (n < 2 || n > kMaxBipartitionQubits) {
        fail(ErrorKind::InvalidDimension, "bipartitions need 2 <= n <= " + std::to_string(kMaxBipartitionQubits));
    }
}

void check_dense(int n, int dense_cap) {
    if (n > dense_cap) {
        fail(
            ErrorKind::DenseLimitExceeded,
            std::to_string(n) + " qubits exceed the dense cap of " + std::to_string(dense_cap));
    }
}

// Amplitudes of `v` arranged as a |A| x |B| matrix.
MatrixXcd amplitude_matrix(const Amplitudes &amps, int n, const Bipartition &cut) {
    auto rows = site_offsets(n, cut.sites_a());
    auto cols = site_offsets(n, cut.sites_b());
    MatrixXcd m(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (Index r = 0; r < m.rows(); r++) {
        for (Index c = 0; c < m.cols(); c++) {
            m(r, c) = amps[rows[r] | cols[c]];
        }
    }
    return m;
}

VectorXcd haar_vector(Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    VectorXcd v(dim);
    for (Index i = 0; i < dim; i++) {
        double re = g(rng);
        double im = g(rng);
        v(i) = Complex(re, im);
    }
    return v.normalized();
}

// Given the columns c_i, returns max_x sum_i |c_i^H x|^2 and writes the maximizer.
double best_response(const MatrixXcd &columns, VectorXcd &out) {
    MatrixXcd gram = columns.adjoint() * columns;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram);
    Index top = gram.rows() - 1;
    double value = std::max(0.0, es.eigenvalues()(top));
    VectorXcd candidate = columns * es.eigenvectors().col(top);
    double norm = candidate.norm();
    if (norm > 1e-150) {
        out = candidate / norm;
    }
    return value;
}

struct RestartOutcome {
    double overlap = 0;
    int iterations = 0;
    bool converged = false;
    bool monotone = true;
    std::vector<double> trace;
    VectorXcd phi;
    VectorXcd psi;
};

RestartOutcome run_restart(const std::vector<MatrixXcd> &blocks, const SeesawOptions &options, uint64_t seed) {
    std::mt19937_64 rng(seed);
    Index dim_a = blocks.front().rows();
    Index dim_b = blocks.front().cols();
    Index r = static_cast<Index>(blocks.size());

    RestartOutcome out;
    out.phi = haar_vector(dim_a, rng);
    out.psi = haar_vector(dim_b, rng);

    auto overlap = [&](const VectorXcd &phi, const VectorXcd &psi) {
        double total = 0;
        for (const auto &u : blocks) {
            total += std::norm(Complex((phi.transpose() * u.conjugate() * psi)(0, 0)));
        }
        return total;
    };

    double prev = overlap(out.phi, out.psi);
    out.trace.push_back(prev);
    MatrixXcd columns_a(dim_a, r);
    MatrixXcd columns_b(dim_b, r);
    for (int it = 1; it <= options.max_iter; it++) {
        out.iterations = it;
        for (Index i = 0; i < r; i++) {
            columns_a.col(i) = blocks[i] * out.psi.conjugate();
        }
        double half = best_response(columns_a, out.phi);
        for (Index i = 0; i < r; i++) {
            columns_b.col(i) = blocks[i].transpose() * out.phi.conjugate();
        }
        double full = best_response(columns_b, out.psi);
        out.trace.push_back(half);
        out.trace.push_back(full);
        if (half < prev - 1e-12 || full < half - 1e-12) {
            out.monotone = false;
        }
        bool done = full - prev < options.tol;
        prev = std::max(prev, full);
        if (done) {
            out.converged = true;
            break;
        }
    }
    out.overlap = std::min(1.0, prev);
    return out;
}

StateVector to_state(const VectorXcd &v) {
    Amplitudes amps(v.data(), v.data() + v.size());
    return StateVector::normalized(std::countr_zero(static_cast<uint64_t>(v.size())), std::move(amps));
}

}  // namespace

Bipartition Bipartition::from_sites(int n, std::span<const int> side_a) {
    check_cut_size(n);
    uint32_t mask = 0;
    for (int s : side_a) {
        if (s < 0 || s >= n) {
            fail(ErrorKind::DimensionMismatch, "cut site " + std::to_string(s) + " out of range");
        }
        mask |= uint32_t{1} << s;
    }
    uint32_t all = (uint32_t{1} << n) - 1;
    if (mask == 0 || mask == all) {
        fail(ErrorKind::InvalidArgument, "both sides of a bipartition must be nonempty");
    }
    if (!(mask & 1)) {
        mask = all ^ mask;
    }
    return Bipartition{n, mask};
}

std::vector<int> Bipartition::sites_a() const {
    std::vector<int> sites;
    for (int s = 0; s < n; s++) {
        if ((side_a >> s) & 1) {
            sites.push_back(s);
        }
    }
    return sites;
}

std::vector<int> Bipartition::sites_b() const {
    std::vector<int> sites;
    for (int s = 0; s < n; s++) {
        if (!((side_a >> s) & 1)) {
            sites.push_back(s);
        }
    }
    return sites;
}

std::string Bipartition::str() const {
    auto side = [](const std::vector<int> &sites) {
        std::string s = "{";
        for (size_t i = 0; i < sites.size(); i++) {
            if (i) {
                s += ",";
            }
            s += std::to_string(sites[i] + 1);
        }
        return s + "}";
    };
    return side(sites_a()) + "|" + side(sites_b());
}

std::vector<Bipartition> enumerate_bipartitions(int n) {
    check_cut_size(n);
    std::vector<Bipartition> cuts;
    uint32_t all = (uint32_t{1} << n) - 1;
    for (uint32_t rest = 0; rest < (uint32_t{1} << (n - 1)); rest++) {
        uint32_t mask = 1 | (rest << 1);
        if (mask != all) {
            cuts.push_back({n, mask});
        }
    }
    std::sort(cuts.begin(), cuts.end(), [](const Bipartition &a, const Bipartition &b) {
        auto ca = std::popcount(a.side_a);
        auto cb = std::popcount(b.side_a);
        if (ca != cb) {
            return ca < cb;
        }
        return a.sites_a() < b.sites_a();
    });
    return cuts;
}

double negativity(const LowRankState &state, std::span<const int> transposed_sites, int dense_cap) {
    int n = state.num_qubits();
    check_dense(n, dense_cap);
    DenseOperator rho = density_matrix(state, dense_cap);
    uint64_t mask = 0;
    for (int s : transposed_sites) {
        if (s < 0 || s >= n) {
            fail(ErrorKind::DimensionMismatch, "transposed site out of range");
        }
        mask |= site_bit(n, s);
    }
    DenseOperator pt(rho.rows(), rho.cols());
    for (uint64_t i = 0; i < static_cast<uint64_t>(rho.rows()); i++) {
        for (uint64_t j = 0; j < static_cast<uint64_t>(rho.cols()); j++) {
            pt((i & ~mask) | (j & mask), (j & ~mask) | (i & mask)) = rho(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(pt, Eigen::EigenvaluesOnly);
    double total = 0;
    for (Index i = 0; i < es.eigenvalues().size(); i++) {
        total += std::max(0.0, -es.eigenvalues()(i));
    }
    return total;
}

double negativity(const LowRankState &state, const Bipartition &cut, int dense_cap) {
    if (cut.n != state.num_qubits()) {
        fail(ErrorKind::DimensionMismatch, "cut and state have different qubit counts");
    }
    return negativity(state, cut.sites_a(), dense_cap);
}

std::vector<double> schmidt_coefficients(const StateVector &v, const Bipartition &cut) {
    if (cut.n != v.num_qubits()) {
        fail(ErrorKind::DimensionMismatch, "cut and state have different qubit counts");
    }
    MatrixXcd m = amplitude_matrix(v.amplitudes(), v.num_qubits(), cut);
    Eigen::JacobiSVD<MatrixXcd> svd(m);
    auto s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

int schmidt_rank(const StateVector &v, const Bipartition &cut, double tol) {
    int rank = 0;
    for (double s : schmidt_coefficients(v, cut)) {
        rank += s > tol;
    }
    return rank;
}

SeesawResult seesaw_product_overlap(
    std::span<const StateVector> subspace, const Bipartition &cut, const SeesawOptions &options) {
    if (subspace.empty()) {
        fail(ErrorKind::InvalidArgument, "seesaw needs a nonempty subspace");
    }
    if (options.restarts < 1 || options.max_iter < 1) {
        fail(ErrorKind::InvalidArgument, "seesaw needs restarts >= 1 and max_iter >= 1");
    }
    int n = cut.n;
    // Modified Gram-Schmidt over the spanning vectors.
    std::vector<VectorXcd> basis;
    for (const auto &v : subspace) {
        if (v.num_qubits() != n) {
            fail(ErrorKind::DimensionMismatch, "subspace vector and cut have different qubit counts");
        }
        VectorXcd x = Eigen::Map<const VectorXcd>(v.amplitudes().data(), static_cast<Index>(v.dimension()));
        for (const auto &b : basis) {
            x -= b.dot(x) * b;
        }
        if (x.norm() > 1e-10) {
            basis.push_back(x.normalized());
        }
    }
    std::vector<MatrixXcd> blocks;
    for (const auto &b : basis) {
        Amplitudes amps(b.data(), b.data() + b.size());
        blocks.push_back(amplitude_matrix(amps, n, cut));
    }

    std::vector<RestartOutcome> outcomes(options.restarts);
    parallel_chunks(static_cast<size_t>(options.restarts), 1, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; i++) {
            outcomes[i] = run_restart(blocks, options, options.seed + i);
        }
    });

    SeesawResult result;
    result.bipartition = cut;
    result.restarts = options.restarts;
    size_t best = 0;
    for (size_t i = 0; i < outcomes.size(); i++) {
        result.monotone = result.monotone && outcomes[i].monotone;
        if (outcomes[i].overlap > outcomes[best].overlap) {
            best = i;
        }
    }
    const auto &o = outcomes[best];
    result.best_overlap = o.overlap;
    result.iterations_used = o.iterations;
    result.converged = o.converged;
    result.trace = o.trace;
    result.state_a = to_state(o.phi);
    result.state_b = to_state(o.psi);
    return result;
}

SeesawResult seesaw_product_overlap(const Bipartition &cut, const SeesawOptions &options) {
    std::vector<StateVector> subspace{make_w(cut.n), make_wbar(cut.n)};
    return seesaw_product_overlap(subspace, cut, options);
}

bool weight_argument_check(const Bipartition &cut, int dense_cap) {
    int n = cut.n;
    check_cut_size(n);
    check_dense(n, dense_cap);
    StateVector w = make_w(n);
    StateVector wbar = make_wbar(n);
    Index dim = static_cast<Index>(w.dimension());

    // The image of span{W, Wbar} under P_k must be exactly the line of `target`.
    auto image_is_line = [&](int k, const StateVector &target) {
        WeightProjector proj(n, k);
        MatrixXcd image(dim, 2);
        auto a = proj.apply(w);
        auto b = proj.apply(wbar);
        for (Index i = 0; i < dim; i++) {
            image(i, 0) = a[i];
            image(i, 1) = b[i];
        }
        Eigen::JacobiSVD<MatrixXcd> svd(image, Eigen::ComputeThinU);
        auto s = svd.singularValues();
        if (s(0) <= 1e-10 || s(1) > 1e-10) {
            return false;
        }
        VectorXcd direction = svd.matrixU().col(0);
        VectorXcd t = Eigen::Map<const VectorXcd>(target.amplitudes().data(), dim);
        return std::abs(std::abs(t.dot(direction)) - 1.0) <= 1e-10;
    };

    return image_is_line(1, w) && image_is_line(n - 1, wbar) && schmidt_rank(w, cut) > 1 &&
           schmidt_rank(wbar, cut) > 1;
}

EntanglementReport genuine_entanglement_report(int n, double p, const SeesawOptions &options, int dense_cap) {
    check_cut_size(n);
    LowRankState state = make_rho(n, p);
    std::vector<StateVector> range;
    for (const auto &t : state.terms()) {
        range.push_back(t.vector);
    }

    EntanglementReport report;
    report.n = n;
    report.p = p;
    report.negativity_available = n <= dense_cap;
    report.genuine = true;
    for (const auto &cut : enumerate_bipartitions(n)) {
        CutReport c;
        c.cut = cut;
        if (report.negativity_available) {
            c.negativity = negativity(state, cut, dense_cap);
            c.weight_argument = weight_argument_check(cut, dense_cap);
            if (!(*c.negativity > report.negativity_threshold)) {
                report.genuine = false;
            }
        }
        c.seesaw = seesaw_product_overlap(range, cut, options);
        if (!(c.seesaw.best_overlap < 1 - report.overlap_margin)) {
            report.genuine = false;
        }
        report.cuts.push_back(std::move(c));
    }
    return report;
}

}  // namespace multicorr
