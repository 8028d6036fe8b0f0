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

#include "qpdim/qudit.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <stdexcept>

namespace qpdim {

namespace {

void check_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square");
    }
}

double hermiticity_defect(const CMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

} // namespace

std::int64_t dim_pow(int d, int n) {
    if (d < 2) throw std::invalid_argument("dim_pow: local dimension must be >= 2");
    if (n < 0) throw std::invalid_argument("dim_pow: negative qudit count");
    std::int64_t dim = 1;
    for (int i = 0; i < n; ++i) {
        if (dim > (int64_t(1) << 56) / d) throw std::invalid_argument("dim_pow: d^n too large");
        dim *= d;
    }
    return dim;
}

std::vector<int> index_to_digits(std::int64_t index, int d, int n) {
    std::vector<int> digits(n, 0);
    for (int i = n - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(index % d);
        index /= d;
    }
    if (index != 0) throw std::invalid_argument("index_to_digits: index out of range");
    return digits;
}

std::int64_t digits_to_index(const std::vector<int>& digits, int d) {
    std::int64_t index = 0;
    for (int digit : digits) {
        if (digit < 0 || digit >= d) throw std::invalid_argument("digits_to_index: digit out of range");
        index = index * d + digit;
    }
    return index;
}

std::string digits_to_label(const std::vector<int>& digits) {
    std::string label;
    label.reserve(digits.size());
    for (int digit : digits) {
        if (digit < 10) {
            label.push_back(static_cast<char>('0' + digit));
        } else {
            label.push_back('[');
            label += std::to_string(digit);
            label.push_back(']');
        }
    }
    return label;
}

PureState::PureState(int n, int d, CVector amplitudes, double tol)
    : n_(n), d_(d), amplitudes_(std::move(amplitudes)) {
    const std::int64_t dim = dim_pow(d, n);
    if (amplitudes_.size() != dim) {
        throw std::invalid_argument("PureState: amplitude vector must have length d^n");
    }
    const double norm_sq = amplitudes_.squaredNorm();
    if (std::abs(norm_sq - 1.0) > 2.0 * tol) {
        throw std::invalid_argument("PureState: state vector is not normalized");
    }
}

PureState PureState::basis(int n, int d, std::int64_t index) {
    CVector amp = CVector::Zero(dim_pow(d, n));
    if (index < 0 || index >= amp.size()) throw std::invalid_argument("PureState::basis: index out of range");
    amp[index] = 1.0;
    return PureState(n, d, std::move(amp));
}

DensityMatrix::DensityMatrix(int n, int d, CMatrix matrix, bool allow_subnormalized, double tol)
    : n_(n), d_(d), matrix_(std::move(matrix)) {
    check_square(matrix_, "DensityMatrix");
    const std::int64_t dim = dim_pow(d, n);
    if (matrix_.rows() != dim) throw std::invalid_argument("DensityMatrix: dimension must be d^n");
    if (hermiticity_defect(matrix_) > tol) throw std::invalid_argument("DensityMatrix: not Hermitian");
    const Eigen::VectorXd evals = hermitian_eigenvalues(matrix_);
    if (evals.minCoeff() < -tol) throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    const double tr = matrix_.trace().real();
    const double upper = 1.0 + tol;
    const double lower = allow_subnormalized ? -tol : 1.0 - tol;
    if (tr > upper || tr < lower) throw std::invalid_argument("DensityMatrix: trace out of range");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    CMatrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityMatrix(psi.n(), psi.d(), std::move(m));
}

Effect::Effect(CMatrix matrix, double tol) : matrix_(std::move(matrix)) {
    check_square(matrix_, "Effect");
    if (hermiticity_defect(matrix_) > tol) throw std::invalid_argument("Effect: not Hermitian");
    const Eigen::VectorXd evals = hermitian_eigenvalues(matrix_);
    if (evals.minCoeff() < -tol || evals.maxCoeff() > 1.0 + tol) {
        throw std::invalid_argument("Effect: eigenvalues must lie in [0, 1]");
    }
}

Effect Effect::projector(const PureState& psi) {
    return Effect(psi.amplitudes() * psi.amplitudes().adjoint());
}

Effect Effect::basis_projector(int n, int d, std::int64_t index) {
    return projector(PureState::basis(n, d, index));
}

QuantumOperation::QuantumOperation(std::vector<CMatrix> kraus, double tol)
    : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw std::invalid_argument("QuantumOperation: empty Kraus family");
    const Eigen::Index dim = kraus_.front().rows();
    CMatrix gram = CMatrix::Zero(dim, dim);
    for (const CMatrix& k : kraus_) {
        check_square(k, "QuantumOperation");
        if (k.rows() != dim) throw std::invalid_argument("QuantumOperation: mixed Kraus dimensions");
        gram += k.adjoint() * k;
    }
    const Eigen::VectorXd evals = hermitian_eigenvalues(gram);
    if (evals.maxCoeff() > 1.0 + tol) {
        throw std::invalid_argument("QuantumOperation: sum K^dagger K exceeds identity (not trace-non-increasing)");
    }
}

QuantumOperation QuantumOperation::identity(std::int64_t dim) {
    return QuantumOperation({CMatrix::Identity(dim, dim)});
}

QuantumOperation QuantumOperation::from_unitary(CMatrix unitary, double tol) {
    if (unitarity_defect(unitary) > tol) {
        throw std::invalid_argument("QuantumOperation::from_unitary: matrix is not unitary");
    }
    return QuantumOperation({std::move(unitary)});
}

QuantumOperation QuantumOperation::depolarizing_qubit(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing_qubit: p outside [0, 1]");
    // Kraus form: sqrt(1-3p/4) I, sqrt(p/4) {X, Y, Z}.
    CMatrix id = CMatrix::Identity(2, 2);
    CMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    std::vector<CMatrix> kraus;
    kraus.push_back(std::sqrt(1.0 - 0.75 * p) * id);
    if (p > 0.0) {
        kraus.push_back(std::sqrt(0.25 * p) * x);
        kraus.push_back(std::sqrt(0.25 * p) * y);
        kraus.push_back(std::sqrt(0.25 * p) * z);
    }
    return QuantumOperation(std::move(kraus));
}

bool QuantumOperation::is_channel(double tol) const {
    const Eigen::Index dim = kraus_.front().rows();
    CMatrix gram = CMatrix::Zero(dim, dim);
    for (const CMatrix& k : kraus_) gram += k.adjoint() * k;
    return (gram - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= tol;
}

ProductVector::ProductVector(int d, std::vector<CVector> locals, double tol)
    : d_(d), locals_(std::move(locals)) {
    if (locals_.empty()) throw std::invalid_argument("ProductVector: no locals");
    basis_index_ = 0;
    for (const CVector& v : locals_) {
        if (v.size() != d) throw std::invalid_argument("ProductVector: local dimension mismatch");
        if (std::abs(v.squaredNorm() - 1.0) > 2.0 * tol) {
            throw std::invalid_argument("ProductVector: local vector is not normalized");
        }
        if (basis_index_ >= 0) {
            int level = -1;
            for (int j = 0; j < d; ++j) {
                const Complex a = v[j];
                if (a == Complex(1.0, 0.0)) {
                    level = (level == -1) ? j : -2;
                } else if (a != Complex(0.0, 0.0)) {
                    level = -2;
                }
                if (level == -2) break;
            }
            basis_index_ = (level >= 0) ? basis_index_ * d + level : -1;
        }
    }
}

ProductVector ProductVector::basis(int n, int d, std::int64_t index) {
    const std::vector<int> digits = index_to_digits(index, d, n);
    std::vector<CVector> locals;
    locals.reserve(n);
    for (int i = 0; i < n; ++i) {
        CVector v = CVector::Zero(d);
        v[digits[i]] = 1.0;
        locals.push_back(std::move(v));
    }
    return ProductVector(d, std::move(locals));
}

ProductVector ProductVector::random_haar(int n, int d, Rng& rng) {
    std::vector<CVector> locals;
    locals.reserve(n);
    for (int i = 0; i < n; ++i) {
        CVector v(d);
        for (int j = 0; j < d; ++j) v[j] = rng.complex_normal();
        v.normalize();
        locals.push_back(std::move(v));
    }
    return ProductVector(d, std::move(locals));
}

PureState ProductVector::to_state() const {
    return product_state(locals_, d_);
}

double born_probability(const DensityMatrix& rho, const Effect& effect, double tol) {
    if (rho.dim() != effect.dim()) {
        throw std::invalid_argument("born_probability: state/effect dimension mismatch");
    }
    const double p = (rho.matrix() * effect.matrix()).trace().real();
    if (p < -tol || p > 1.0 + tol) {
        throw std::invalid_argument("born_probability: value outside [0, 1] beyond tolerance");
    }
    return std::clamp(p, 0.0, 1.0);
}

double born_probability(const PureState& psi, const PureState& phi) {
    if (psi.dim() != phi.dim()) {
        throw std::invalid_argument("born_probability: state dimension mismatch");
    }
    return std::norm(psi.amplitudes().dot(phi.amplitudes()));
}

PureState product_state(const std::vector<CVector>& locals, int d, double tol) {
    if (locals.empty()) throw std::invalid_argument("product_state: no local vectors");
    for (const CVector& v : locals) {
        if (v.size() != d) throw std::invalid_argument("product_state: local dimension mismatch");
        if (std::abs(v.squaredNorm() - 1.0) > 2.0 * tol) {
            throw std::invalid_argument("product_state: local vector is not normalized");
        }
    }
    CVector amp = CVector::Ones(1);
    for (const CVector& v : locals) {
        CVector next(amp.size() * d);
        for (Eigen::Index i = 0; i < amp.size(); ++i) {
            for (int j = 0; j < d; ++j) next[i * d + j] = amp[i] * v[j];
        }
        amp.swap(next);
    }
    return PureState(static_cast<int>(locals.size()), d, std::move(amp), tol);
}

CMatrix haar_random_unitary(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("haar_random_unitary: dimension must be >= 1");
    CMatrix z(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) z(r, c) = rng.complex_normal() * M_SQRT1_2;
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the gauge so Q is Haar: multiply columns by the phases of diag(R).
    for (int c = 0; c < dim; ++c) {
        const Complex diag = r(c, c);
        const double mag = std::abs(diag);
        q.col(c) *= (mag > 0.0) ? diag / mag : Complex(1.0, 0.0);
    }
    return q;
}

CMatrix haar_random_unitary(int dim, std::uint64_t seed) {
    Rng rng(seed);
    return haar_random_unitary(dim, rng);
}

DensityMatrix apply_operation(const QuantumOperation& op, const DensityMatrix& rho) {
    if (op.dim() != rho.dim()) {
        throw std::invalid_argument("apply_operation: operation/state dimension mismatch");
    }
    CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
    for (const CMatrix& k : op.kraus()) out += k * rho.matrix() * k.adjoint();
    return DensityMatrix(rho.n(), rho.d(), std::move(out), /*allow_subnormalized=*/true);
}

DensityMatrix choi_state(const QuantumOperation& op, int n, int d) {
    const std::int64_t dim = dim_pow(d, n);
    if (op.dim() != dim) throw std::invalid_argument("choi_state: operation is not on d^n");
    if (!op.is_channel()) throw std::invalid_argument("choi_state: operation is not trace-preserving");
    // tau = (1/D) sum_{i,j} T(|i><j|) ⊗ |i><j|.
    const std::int64_t big = dim * dim;
    CMatrix tau = CMatrix::Zero(big, big);
    const double root = std::sqrt(static_cast<double>(dim));
    for (const CMatrix& k : op.kraus()) {
        // (K ⊗ I)|Omega> has amplitude K(a, b)/sqrt(D) at basis index a*D + b
        // (output register first, per the qudit-0-most-significant convention).
        CVector w(big);
        for (std::int64_t a = 0; a < dim; ++a) {
            for (std::int64_t b = 0; b < dim; ++b) w[a * dim + b] = k(a, b) / root;
        }
        tau += w * w.adjoint();
    }
    return DensityMatrix(2 * n, d, std::move(tau));
}

double unitarity_defect(const CMatrix& u) {
    if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
    return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

} // namespace qpdim
