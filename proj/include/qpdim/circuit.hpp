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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpdim/qudit.hpp"

namespace qpdim {

// One 2-qudit gate slot: layer/slot are 1-based, the qudit pair is unordered
// and stored with a < b (gates range over all 2-qudit unitaries, so an
// orientation of the pair would be redundant).
struct GatePlacement {
    int layer = 1;
    int slot = 1;
    int a = 0;
    int b = 1;
};

// Gate positions of a 2-local circuit: depth layers, size() gates total.
// Gates within a layer act on pairwise disjoint qudit pairs. By default every
// qudit must be touched by at least one gate; allow_idle lifts that rule.
struct CircuitArchitecture {
    int n = 2;
    int d = 2;
    int depth = 1;
    std::vector<GatePlacement> placements; // sorted by (layer, slot)
    bool allow_idle = false;

    int size() const { return static_cast<int>(placements.size()); }
    std::vector<int> layer_sizes() const;
    // Indices into `placements` for one layer (1-based).
    std::vector<int> layer_gates(int layer) const;
    std::string to_string() const;
};

// All invariant violations, empty when the architecture is valid.
std::vector<std::string> validate_architecture(const CircuitArchitecture& arch);
// Throwing wrapper around validate_architecture.
void require_valid_architecture(const CircuitArchitecture& arch);

enum class GateKind { Unitary, Operation };

// Architecture plus concrete gates, one per placement; either all unitary
// matrices or all quantum operations.
class Circuit {
  public:
    Circuit(CircuitArchitecture arch, std::vector<CMatrix> unitaries, double tol = kTol);
    Circuit(CircuitArchitecture arch, std::vector<QuantumOperation> operations);

    static Circuit identity(CircuitArchitecture arch);
    static Circuit random_unitary(CircuitArchitecture arch, Rng& rng);
    // Wraps each unitary gate as a single-Kraus operation (same action).
    static Circuit to_operation_circuit(const Circuit& unitary_circuit);

    const CircuitArchitecture& architecture() const { return arch_; }
    GateKind kind() const { return kind_; }
    const std::vector<CMatrix>& unitaries() const;
    const std::vector<QuantumOperation>& operations() const;

  private:
    CircuitArchitecture arch_;
    GateKind kind_;
    std::vector<CMatrix> unitaries_;
    std::vector<QuantumOperation> operations_;
};

// In-place 2-qudit gate application on a state vector, via index arithmetic on
// the (qudit 0 most significant) basis ordering.
void apply_two_qudit_gate(CVector& psi, const CMatrix& gate, int a, int b, int n, int d);
// Left-multiplication rho <- lift(gate) * rho, column by column.
void apply_two_qudit_gate_left(CMatrix& rho, const CMatrix& gate, int a, int b, int n, int d);

// Applies layers 1..depth in order. Within a layer gates act on disjoint
// pairs, so their order is immaterial.
PureState simulate_unitary_circuit(const Circuit& circuit, const PureState& input);
DensityMatrix simulate_operation_circuit(const Circuit& circuit, const DensityMatrix& input);

// Probability of observing the product measurement vector x on the circuit
// output for product input y: |<x|U|y>|^2 in unitary mode, <x|T(|y><y|)|x> in
// operation mode.
double circuit_output_probability(const Circuit& circuit, const ProductVector& x,
                                  const ProductVector& y);

// Exhaustive, duplicate-free enumeration of canonical architectures: every
// layer is a lexicographically sorted list of disjoint pairs (a < b), layers
// are ordered, no layer is empty, and (unless allow_idle) the pairs cover all
// qudits. Throws on infeasible parameters (size < depth, or more gates than
// depth * floor(n/2) slots).
std::vector<CircuitArchitecture> enumerate_architectures(int n, int d, int depth, int size,
                                                         bool allow_idle = false);

// The crude architecture-count upper bound
//   size! * depth^(size-depth) / (size-depth)! * (n!)^depth,
// exact as a decimal integer string plus its base-2 logarithm. The canonical
// enumeration above is always <= this value.
struct ArchitectureCountBound {
    std::string exact_decimal;
    double log2_value = 0.0;
    double value = 0.0; // +inf when it exceeds double range
};
ArchitectureCountBound count_architecture_bound(int n, int depth, int size);

} // namespace qpdim
