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

#include "qpdim/circuit.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qpdim {

namespace {

using BigInt = boost::multiprecision::cpp_int;

double log2_factorial(std::int64_t k) {
    return std::lgamma(static_cast<double>(k) + 1.0) / std::log(2.0);
}

} // namespace

std::vector<int> CircuitArchitecture::layer_sizes() const {
    std::vector<int> sizes(depth, 0);
    for (const GatePlacement& p : placements) {
        if (p.layer >= 1 && p.layer <= depth) ++sizes[p.layer - 1];
    }
    return sizes;
}

std::vector<int> CircuitArchitecture::layer_gates(int layer) const {
    std::vector<int> idx;
    for (int i = 0; i < size(); ++i) {
        if (placements[i].layer == layer) idx.push_back(i);
    }
    return idx;
}

std::string CircuitArchitecture::to_string() const {
    std::ostringstream out;
    for (int l = 1; l <= depth; ++l) {
        if (l > 1) out << '|';
        for (int i : layer_gates(l)) out << '(' << placements[i].a << ',' << placements[i].b << ')';
    }
    return out.str();
}

std::vector<std::string> validate_architecture(const CircuitArchitecture& arch) {
    std::vector<std::string> violations;
    if (arch.n < 2) violations.push_back("qudit count must be >= 2");
    if (arch.d < 2) violations.push_back("local dimension must be >= 2");
    if (arch.depth < 1) violations.push_back("depth must be >= 1");
    if (arch.placements.empty()) violations.push_back("circuit has no gates");

    std::vector<bool> touched(std::max(arch.n, 0), false);
    for (int i = 0; i < arch.size(); ++i) {
        const GatePlacement& p = arch.placements[i];
        std::ostringstream where;
        where << "gate " << i << " (layer " << p.layer << ", slot " << p.slot << ")";
        if (p.layer < 1 || p.layer > arch.depth) violations.push_back(where.str() + ": layer out of range");
        if (p.a == p.b) violations.push_back(where.str() + ": qudit pair must be distinct");
        if (p.a > p.b) violations.push_back(where.str() + ": qudit pair must be ordered a < b");
        if (p.a < 0 || p.b < 0 || p.a >= arch.n || p.b >= arch.n) {
            violations.push_back(where.str() + ": qudit index out of range");
        } else {
            touched[p.a] = true;
            touched[p.b] = true;
        }
    }

    const std::vector<int> sizes = arch.layer_sizes();
    for (int l = 1; l <= arch.depth; ++l) {
        if (sizes[l - 1] == 0) {
            violations.push_back("layer " + std::to_string(l) + " is empty");
            continue;
        }
        if (sizes[l - 1] > arch.n / 2) {
            violations.push_back("layer " + std::to_string(l) + " holds more gates than n/2");
        }
        std::vector<bool> used(std::max(arch.n, 0), false);
        for (int i : arch.layer_gates(l)) {
            const GatePlacement& p = arch.placements[i];
            if (p.a < 0 || p.b < 0 || p.a >= arch.n || p.b >= arch.n) continue;
            if (used[p.a] || used[p.b]) {
                violations.push_back("layer " + std::to_string(l) + ": gates share qudit " +
                                     std::to_string(used[p.a] ? p.a : p.b));
            }
            used[p.a] = true;
            used[p.b] = true;
        }
    }

    if (!arch.allow_idle) {
        for (int q = 0; q < arch.n; ++q) {
            if (!touched[q]) violations.push_back("qudit " + std::to_string(q) + " is idle");
        }
    }
    return violations;
}

void require_valid_architecture(const CircuitArchitecture& arch) {
    const std::vector<std::string> violations = validate_architecture(arch);
    if (!violations.empty()) {
        std::string message = "invalid architecture:";
        for (const std::string& v : violations) message += " [" + v + "]";
        throw std::invalid_argument(message);
    }
}

Circuit::Circuit(CircuitArchitecture arch, std::vector<CMatrix> unitaries, double tol)
    : arch_(std::move(arch)), kind_(GateKind::Unitary), unitaries_(std::move(unitaries)) {
    require_valid_architecture(arch_);
    if (static_cast<int>(unitaries_.size()) != arch_.size()) {
        throw std::invalid_argument("Circuit: need exactly one unitary per placement");
    }
    const std::int64_t gate_dim = static_cast<std::int64_t>(arch_.d) * arch_.d;
    for (const CMatrix& u : unitaries_) {
        if (u.rows() != gate_dim || u.cols() != gate_dim) {
            throw std::invalid_argument("Circuit: gate must be d^2 x d^2");
        }
        if (unitarity_defect(u) > tol) throw std::invalid_argument("Circuit: gate is not unitary");
    }
}

Circuit::Circuit(CircuitArchitecture arch, std::vector<QuantumOperation> operations)
    : arch_(std::move(arch)), kind_(GateKind::Operation), operations_(std::move(operations)) {
    require_valid_architecture(arch_);
    if (static_cast<int>(operations_.size()) != arch_.size()) {
        throw std::invalid_argument("Circuit: need exactly one operation per placement");
    }
    const std::int64_t gate_dim = static_cast<std::int64_t>(arch_.d) * arch_.d;
    for (const QuantumOperation& op : operations_) {
        if (op.dim() != gate_dim) throw std::invalid_argument("Circuit: operation must act on d^2");
    }
}

Circuit Circuit::identity(CircuitArchitecture arch) {
    const std::int64_t gate_dim = static_cast<std::int64_t>(arch.d) * arch.d;
    std::vector<CMatrix> gates(arch.placements.size(), CMatrix::Identity(gate_dim, gate_dim));
    return Circuit(std::move(arch), std::move(gates));
}

Circuit Circuit::random_unitary(CircuitArchitecture arch, Rng& rng) {
    const std::int64_t gate_dim = static_cast<std::int64_t>(arch.d) * arch.d;
    std::vector<CMatrix> gates;
    gates.reserve(arch.placements.size());
    for (std::size_t i = 0; i < arch.placements.size(); ++i) {
        gates.push_back(haar_random_unitary(static_cast<int>(gate_dim), rng));
    }
    return Circuit(std::move(arch), std::move(gates));
}

Circuit Circuit::to_operation_circuit(const Circuit& unitary_circuit) {
    if (unitary_circuit.kind() != GateKind::Unitary) {
        throw std::invalid_argument("to_operation_circuit: expected a unitary circuit");
    }
    std::vector<QuantumOperation> ops;
    ops.reserve(unitary_circuit.unitaries().size());
    for (const CMatrix& u : unitary_circuit.unitaries()) ops.push_back(QuantumOperation::from_unitary(u));
    return Circuit(unitary_circuit.architecture(), std::move(ops));
}

const std::vector<CMatrix>& Circuit::unitaries() const {
    if (kind_ != GateKind::Unitary) throw std::logic_error("Circuit: not in unitary mode");
    return unitaries_;
}

const std::vector<QuantumOperation>& Circuit::operations() const {
    if (kind_ != GateKind::Operation) throw std::logic_error("Circuit: not in operation mode");
    return operations_;
}

void apply_two_qudit_gate(CVector& psi, const CMatrix& gate, int a, int b, int n, int d) {
    const std::int64_t dim = psi.size();
    const std::int64_t stride_a = dim_pow(d, n - 1 - a);
    const std::int64_t stride_b = dim_pow(d, n - 1 - b);
    const int dd = d * d;
    std::vector<Complex> local(dd);
    for (std::int64_t idx = 0; idx < dim; ++idx) {
        const int digit_a = static_cast<int>((idx / stride_a) % d);
        const int digit_b = static_cast<int>((idx / stride_b) % d);
        if (digit_a != 0 || digit_b != 0) continue;
        for (int ia = 0; ia < d; ++ia) {
            for (int ib = 0; ib < d; ++ib) local[ia * d + ib] = psi[idx + ia * stride_a + ib * stride_b];
        }
        for (int r = 0; r < dd; ++r) {
            Complex acc = 0.0;
            for (int c = 0; c < dd; ++c) acc += gate(r, c) * local[c];
            psi[idx + (r / d) * stride_a + (r % d) * stride_b] = acc;
        }
    }
}

void apply_two_qudit_gate_left(CMatrix& rho, const CMatrix& gate, int a, int b, int n, int d) {
    CVector column(rho.rows());
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        column = rho.col(c);
        apply_two_qudit_gate(column, gate, a, b, n, d);
        rho.col(c) = column;
    }
}

PureState simulate_unitary_circuit(const Circuit& circuit, const PureState& input) {
    if (circuit.kind() != GateKind::Unitary) {
        throw std::invalid_argument("simulate_unitary_circuit: circuit is not in unitary mode");
    }
    const CircuitArchitecture& arch = circuit.architecture();
    if (input.n() != arch.n || input.d() != arch.d) {
        throw std::invalid_argument("simulate_unitary_circuit: input dimension mismatch");
    }
    CVector psi = input.amplitudes();
    for (int layer = 1; layer <= arch.depth; ++layer) {
        for (int i : arch.layer_gates(layer)) {
            const GatePlacement& p = arch.placements[i];
            apply_two_qudit_gate(psi, circuit.unitaries()[i], p.a, p.b, arch.n, arch.d);
        }
    }
    return PureState(arch.n, arch.d, std::move(psi));
}

DensityMatrix simulate_operation_circuit(const Circuit& circuit, const DensityMatrix& input) {
    if (circuit.kind() != GateKind::Operation) {
        throw std::invalid_argument("simulate_operation_circuit: circuit is not in operation mode");
    }
    const CircuitArchitecture& arch = circuit.architecture();
    if (input.n() != arch.n || input.d() != arch.d) {
        throw std::invalid_argument("simulate_operation_circuit: input dimension mismatch");
    }
    CMatrix rho = input.matrix();
    CMatrix accum(rho.rows(), rho.cols());
    for (int layer = 1; layer <= arch.depth; ++layer) {
        for (int i : arch.layer_gates(layer)) {
            const GatePlacement& p = arch.placements[i];
            const QuantumOperation& op = circuit.operations()[i];
            accum.setZero();
            for (const CMatrix& k : op.kraus()) {
                CMatrix term = rho;
                apply_two_qudit_gate_left(term, k, p.a, p.b, arch.n, arch.d);
                term.adjointInPlace();
                apply_two_qudit_gate_left(term, k, p.a, p.b, arch.n, arch.d);
                term.adjointInPlace();
                accum += term;
            }
            rho.swap(accum);
        }
    }
    return DensityMatrix(arch.n, arch.d, std::move(rho), /*allow_subnormalized=*/true);
}

double circuit_output_probability(const Circuit& circuit, const ProductVector& x,
                                  const ProductVector& y) {
    const CircuitArchitecture& arch = circuit.architecture();
    if (x.n() != arch.n || x.d() != arch.d || y.n() != arch.n || y.d() != arch.d) {
        throw std::invalid_argument("circuit_output_probability: vector dimension mismatch");
    }
    if (circuit.kind() == GateKind::Unitary) {
        const PureState out = simulate_unitary_circuit(circuit, y.to_state());
        return born_probability(out, x.to_state());
    }
    const DensityMatrix out = simulate_operation_circuit(circuit, DensityMatrix::from_pure(y.to_state()));
    const CVector xs = x.to_state().amplitudes();
    const double p = (xs.adjoint() * out.matrix() * xs).real()(0, 0);
    return std::clamp(p, 0.0, 1.0);
}

namespace {

// All lexicographically increasing lists of `count` disjoint pairs from [0, n).
void disjoint_pair_sets(int n, int count, int min_pair_code, std::vector<GatePlacement>& current,
                        std::vector<bool>& used, const std::function<void()>& emit) {
    if (count == 0) {
        emit();
        return;
    }
    for (int a = 0; a < n; ++a) {
        if (used[a]) continue;
        for (int b = a + 1; b < n; ++b) {
            if (used[b]) continue;
            const int code = a * n + b;
            if (code < min_pair_code) continue;
            used[a] = used[b] = true;
            current.push_back(GatePlacement{0, 0, a, b});
            disjoint_pair_sets(n, count - 1, code + 1, current, used, emit);
            current.pop_back();
            used[a] = used[b] = false;
        }
    }
}

void enumerate_layers(int n, int d, int depth, int size, bool allow_idle, int layer,
                      int remaining, std::vector<std::vector<GatePlacement>>& layers,
                      std::vector<bool>& touched, std::vector<CircuitArchitecture>& out) {
    const int layers_left = depth - layer + 1;
    if (layers_left == 0) {
        if (remaining != 0) return;
        if (!allow_idle) {
            for (int q = 0; q < n; ++q) {
                if (!touched[q]) return;
            }
        }
        CircuitArchitecture arch;
        arch.n = n;
        arch.d = d;
        arch.depth = depth;
        arch.allow_idle = allow_idle;
        for (int l = 0; l < depth; ++l) {
            int slot = 1;
            for (GatePlacement p : layers[l]) {
                p.layer = l + 1;
                p.slot = slot++;
                arch.placements.push_back(p);
            }
        }
        out.push_back(std::move(arch));
        return;
    }
    const int max_per_layer = n / 2;
    for (int k = 1; k <= std::min(remaining, max_per_layer); ++k) {
        const int rest = remaining - k;
        if (rest < layers_left - 1 || rest > (layers_left - 1) * max_per_layer) continue;
        std::vector<GatePlacement> current;
        std::vector<bool> used(n, false);
        disjoint_pair_sets(n, k, 0, current, used, [&]() {
            layers[layer - 1] = current;
            std::vector<int> newly;
            for (const GatePlacement& p : current) {
                if (!touched[p.a]) {
                    touched[p.a] = true;
                    newly.push_back(p.a);
                }
                if (!touched[p.b]) {
                    touched[p.b] = true;
                    newly.push_back(p.b);
                }
            }
            enumerate_layers(n, d, depth, size, allow_idle, layer + 1, rest, layers, touched, out);
            for (int q : newly) touched[q] = false;
            layers[layer - 1].clear();
        });
    }
}

} // namespace

std::vector<CircuitArchitecture> enumerate_architectures(int n, int d, int depth, int size,
                                                         bool allow_idle) {
    if (n < 2) throw std::invalid_argument("enumerate_architectures: need n >= 2");
    if (d < 2) throw std::invalid_argument("enumerate_architectures: need d >= 2");
    if (depth < 1) throw std::invalid_argument("enumerate_architectures: need depth >= 1");
    if (size < depth) {
        throw std::invalid_argument("enumerate_architectures: size < depth forces an empty layer");
    }
    if (size > depth * (n / 2)) {
        throw std::invalid_argument("enumerate_architectures: size exceeds depth * floor(n/2)");
    }
    std::vector<CircuitArchitecture> out;
    std::vector<std::vector<GatePlacement>> layers(depth);
    std::vector<bool> touched(n, false);
    enumerate_layers(n, d, depth, size, allow_idle, 1, size, layers, touched, out);
    return out;
}

ArchitectureCountBound count_architecture_bound(int n, int depth, int size) {
    if (n < 2) throw std::invalid_argument("count_architecture_bound: need n >= 2");
    if (depth < 1) throw std::invalid_argument("count_architecture_bound: need depth >= 1");
    if (size < depth) {
        throw std::invalid_argument("count_architecture_bound: size < depth forces an empty layer");
    }
    // size! / (size-depth)! * depth^(size-depth) * (n!)^depth
    BigInt exact = 1;
    for (int k = size - depth + 1; k <= size; ++k) exact *= k;
    for (int k = 0; k < size - depth; ++k) exact *= depth;
    BigInt n_factorial = 1;
    for (int k = 2; k <= n; ++k) n_factorial *= k;
    for (int k = 0; k < depth; ++k) exact *= n_factorial;

    ArchitectureCountBound bound;
    bound.exact_decimal = exact.str();
    bound.log2_value = log2_factorial(size) - log2_factorial(size - depth) +
                       (size - depth) * std::log2(static_cast<double>(depth)) +
                       depth * log2_factorial(n);
    bound.value = bound.log2_value < 1023.0 ? std::exp2(bound.log2_value)
                                            : std::numeric_limits<double>::infinity();
    return bound;
}

} // namespace qpdim
