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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qpdim/rng.hpp"

namespace qpdim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Default absolute tolerance for all validity checks. Every validating
// constructor takes an optional override.
inline constexpr double kTol = 1e-9;

// d^n as a 64-bit index space; throws when it would not fit.
std::int64_t dim_pow(int d, int n);

// Basis-index convention used everywhere: qudit 0 is the most significant
// base-d digit, i.e. index(b_0..b_{n-1}) = sum_i b_i * d^(n-1-i).
std::vector<int> index_to_digits(std::int64_t index, int d, int n);
std::int64_t digits_to_index(const std::vector<int>& digits, int d);
std::string digits_to_label(const std::vector<int>& digits);

// Unit vector in (C^d)^{⊗n}.
class PureState {
  public:
    PureState(int n, int d, CVector amplitudes, double tol = kTol);

    static PureState basis(int n, int d, std::int64_t index);

    int n() const { return n_; }
    int d() const { return d_; }
    std::int64_t dim() const { return amplitudes_.size(); }
    const CVector& amplitudes() const { return amplitudes_; }

  private:
    int n_;
    int d_;
    CVector amplitudes_;
};

// Positive semidefinite matrix over (C^d)^{⊗n}, trace 1 (or <= 1 when
// sub-normalized outputs of trace-non-increasing maps are allowed).
class DensityMatrix {
  public:
    DensityMatrix(int n, int d, CMatrix matrix, bool allow_subnormalized = false,
                  double tol = kTol);

    static DensityMatrix from_pure(const PureState& psi);

    int n() const { return n_; }
    int d() const { return d_; }
    std::int64_t dim() const { return matrix_.rows(); }
    const CMatrix& matrix() const { return matrix_; }
    double trace() const { return matrix_.trace().real(); }

  private:
    int n_;
    int d_;
    CMatrix matrix_;
};

// Measurement effect: 0 <= E <= 1.
class Effect {
  public:
    explicit Effect(CMatrix matrix, double tol = kTol);

    static Effect projector(const PureState& psi);
    static Effect basis_projector(int n, int d, std::int64_t index);

    std::int64_t dim() const { return matrix_.rows(); }
    const CMatrix& matrix() const { return matrix_; }

  private:
    CMatrix matrix_;
};

// Completely positive trace-non-increasing map in Kraus form:
// T(rho) = sum_k K_k rho K_k^dagger with sum_k K_k^dagger K_k <= 1.
class QuantumOperation {
  public:
    explicit QuantumOperation(std::vector<CMatrix> kraus, double tol = kTol);

    static QuantumOperation identity(std::int64_t dim);
    static QuantumOperation from_unitary(CMatrix unitary, double tol = kTol);
    // Qubit depolarizing channel: rho -> (1-p) rho + p * I/2.
    static QuantumOperation depolarizing_qubit(double p);

    std::int64_t dim() const { return kraus_.front().rows(); }
    const std::vector<CMatrix>& kraus() const { return kraus_; }
    // Trace-preserving within tol.
    bool is_channel(double tol = kTol) const;

  private:
    std::vector<CMatrix> kraus_;
};

// Product vector over n qudits; the raw material for product measurements and
// product inputs. Locals are unit vectors in C^d.
class ProductVector {
  public:
    ProductVector(int d, std::vector<CVector> locals, double tol = kTol);

    static ProductVector basis(int n, int d, std::int64_t index);
    static ProductVector random_haar(int n, int d, Rng& rng);

    int n() const { return static_cast<int>(locals_.size()); }
    int d() const { return d_; }
    const std::vector<CVector>& locals() const { return locals_; }
    // Index when every local is a computational basis vector, else -1.
    std::int64_t basis_index() const { return basis_index_; }

    PureState to_state() const;

  private:
    int d_;
    std::vector<CVector> locals_;
    std::int64_t basis_index_ = -1;
};

// Born rule p = tr[rho E], clamped into [0,1] when within tol of the interval.
double born_probability(const DensityMatrix& rho, const Effect& effect, double tol = kTol);
// Pure/projective special case |<psi|phi>|^2.
double born_probability(const PureState& psi, const PureState& phi);

// Kronecker product of local unit vectors, qudit 0 most significant.
PureState product_state(const std::vector<CVector>& locals, int d, double tol = kTol);

// Haar-distributed unitary: QR of a complex Gaussian matrix with the R-diagonal
// phase correction.
CMatrix haar_random_unitary(int dim, Rng& rng);
CMatrix haar_random_unitary(int dim, std::uint64_t seed);

// T(rho) = sum_k K_k rho K_k^dagger; output may be sub-normalized.
DensityMatrix apply_operation(const QuantumOperation& op, const DensityMatrix& rho);

// Choi state tau = (T ⊗ Id)(|Omega><Omega|) on 2n qudits, with |Omega> the
// normalized maximally entangled state. Requires a channel. Satisfies
// tr[E T(rho)] = D tr[tau (E ⊗ rho^T)] with D = d^n.
DensityMatrix choi_state(const QuantumOperation& op, int n, int d);

// Frobenius-norm distance to the identity for unitarity checks.
double unitarity_defect(const CMatrix& u);

} // namespace qpdim
