// Copyright 2026 The qpdim authors
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

// Test-only reference implementations, kept deliberately naive and
// independent of the library's simulation paths: dense Kronecker lifts,
// explicit loops, no index arithmetic shared with the code under test.

#pragma once

#include <complex>
#include <vector>

#include "qpdim/circuit.hpp"
#include "qpdim/qudit.hpp"

namespace qpdim::testing {

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline CVector kron_vec(const CVector& a, const CVector& b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        for (Eigen::Index j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
    }
    return out;
}

// Iterated Kronecker product of local vectors, qudit 0 most significant.
inline CVector iterated_kron(const std::vector<CVector>& locals) {
    CVector out = CVector::Ones(1);
    for (const CVector& v : locals) out = kron_vec(out, v);
    return out;
}

// Full d^n x d^n lift of a 2-qudit gate onto the pair (a, b), built from the
// basis-index definition entry by entry.
inline CMatrix dense_lift(const CMatrix& gate, int a, int b, int n, int d) {
    const std::int64_t dim = dim_pow(d, n);
    CMatrix out = CMatrix::Zero(dim, dim);
    for (std::int64_t row = 0; row < dim; ++row) {
        const std::vector<int> rd = index_to_digits(row, d, n);
        for (std::int64_t col = 0; col < dim; ++col) {
            const std::vector<int> cd = index_to_digits(col, d, n);
            bool rest_equal = true;
            for (int q = 0; q < n && rest_equal; ++q) {
                if (q != a && q != b && rd[q] != cd[q]) rest_equal = false;
            }
            if (!rest_equal) continue;
            out(row, col) = gate(rd[a] * d + rd[b], cd[a] * d + cd[b]);
        }
    }
    return out;
}

// The circuit unitary as a dense product of lifted gates, layer 1 applied
// first to the input ket.
inline CMatrix dense_circuit_unitary(const Circuit& circuit) {
    const CircuitArchitecture& arch = circuit.architecture();
    const std::int64_t dim = dim_pow(arch.d, arch.n);
    CMatrix u = CMatrix::Identity(dim, dim);
    for (int layer = 1; layer <= arch.depth; ++layer) {
        for (int g : arch.layer_gates(layer)) {
            const GatePlacement& p = arch.placements[g];
            u = dense_lift(circuit.unitaries()[g], p.a, p.b, arch.n, arch.d) * u;
        }
    }
    return u;
}

// tr[A B] by explicit summation.
inline Complex trace_of_product(const CMatrix& a, const CMatrix& b) {
    Complex total = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) total += a(i, j) * b(j, i);
    }
    return total;
}

// Random Ginibre-based density matrix.
inline DensityMatrix random_density(int n, int d, Rng& rng) {
    const std::int64_t dim = dim_pow(d, n);
    CMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
    }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(n, d, std::move(rho));
}

// Random effect: a Hermitian matrix squashed into [0, 1].
inline Effect random_effect(int n, int d, Rng& rng) {
    const std::int64_t dim = dim_pow(d, n);
    CMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
    }
    CMatrix h = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    const double span = std::max(hi - lo, 1e-12);
    CMatrix e = (h - lo * CMatrix::Identity(dim, dim)) / span;
    return Effect(std::move(e));
}

// Random channel on dimension `dim` with `count` Kraus operators, via the
// polar factor of a stacked Gaussian matrix.
inline QuantumOperation random_channel(std::int64_t dim, int count, Rng& rng) {
    CMatrix stacked(count * dim, dim);
    for (Eigen::Index i = 0; i < stacked.rows(); ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) stacked(i, j) = rng.complex_normal();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(stacked.adjoint() * stacked);
    CVector inv_roots(dim);
    for (Eigen::Index k = 0; k < dim; ++k) inv_roots[k] = 1.0 / std::sqrt(solver.eigenvalues()[k]);
    const CMatrix isometry =
        stacked * (solver.eigenvectors() * inv_roots.asDiagonal() * solver.eigenvectors().adjoint());
    std::vector<CMatrix> kraus;
    for (int k = 0; k < count; ++k) kraus.push_back(isometry.block(k * dim, 0, dim, dim));
    return QuantumOperation(std::move(kraus));
}

} // namespace qpdim::testing
