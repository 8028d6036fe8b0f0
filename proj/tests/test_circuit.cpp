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

#include <doctest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qpdim/circuit.hpp"
#include "qpdim/circuit_io.hpp"

using namespace qpdim;
using namespace qpdim::testing;

namespace {

CircuitArchitecture arch_2q() {
    CircuitArchitecture arch;
    arch.n = 2;
    arch.d = 2;
    arch.depth = 1;
    arch.placements = {GatePlacement{1, 1, 0, 1}};
    return arch;
}

// 3 qubits, depth 2: (0,1) then (1,2).
CircuitArchitecture arch_3q_chain() {
    CircuitArchitecture arch;
    arch.n = 3;
    arch.d = 2;
    arch.depth = 2;
    arch.placements = {GatePlacement{1, 1, 0, 1}, GatePlacement{2, 1, 1, 2}};
    return arch;
}

// 4 qubits, depth 2, size 3: layer 1 = (0,1)(2,3), layer 2 = (1,2).
CircuitArchitecture arch_4q() {
    CircuitArchitecture arch;
    arch.n = 4;
    arch.d = 2;
    arch.depth = 2;
    arch.placements = {GatePlacement{1, 1, 0, 1}, GatePlacement{1, 2, 2, 3},
                       GatePlacement{2, 1, 1, 2}};
    return arch;
}

CMatrix cnot() {
    CMatrix u = CMatrix::Zero(4, 4);
    u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
    return u;
}

} // namespace

TEST_CASE("validate_architecture accepts a single full-coverage gate") {
    CHECK(validate_architecture(arch_2q()).empty());
}

TEST_CASE("validate_architecture flags overlapping pairs within a layer") {
    CircuitArchitecture arch;
    arch.n = 4;
    arch.d = 2;
    arch.depth = 1;
    arch.placements = {GatePlacement{1, 1, 0, 1}, GatePlacement{1, 2, 1, 2}};
    const auto violations = validate_architecture(arch);
    bool found = false;
    for (const auto& v : violations) found |= v.find("share qudit 1") != std::string::npos;
    CHECK(found);
}

TEST_CASE("validate_architecture flags idle qudits unless allowed") {
    CircuitArchitecture arch;
    arch.n = 3;
    arch.d = 2;
    arch.depth = 1;
    arch.placements = {GatePlacement{1, 1, 0, 1}};
    const auto violations = validate_architecture(arch);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "qudit 2 is idle");
    arch.allow_idle = true;
    CHECK(validate_architecture(arch).empty());
}

TEST_CASE("validate_architecture flags empty layers") {
    CircuitArchitecture arch = arch_2q();
    arch.depth = 2;
    bool found = false;
    for (const auto& v : validate_architecture(arch)) found |= v == "layer 2 is empty";
    CHECK(found);
}

TEST_CASE("identity circuit acts trivially") {
    const Circuit circuit = Circuit::identity(arch_3q_chain());
    Rng rng(5);
    const ProductVector x = ProductVector::random_haar(3, 2, rng);
    const PureState in = x.to_state();
    const PureState out = simulate_unitary_circuit(circuit, in);
    CHECK((out.amplitudes() - in.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("a CNOT-style permutation gate maps |10> to |11>") {
    const Circuit circuit(arch_2q(), {cnot()});
    const PureState out = simulate_unitary_circuit(circuit, PureState::basis(2, 2, 2));
    CHECK(std::abs(out.amplitudes()[3] - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("unitary simulation matches the dense lifted-matrix oracle") {
    Rng rng(17);
    const Circuit circuit = Circuit::random_unitary(arch_4q(), rng);
    const ProductVector y = ProductVector::random_haar(4, 2, rng);
    const PureState out = simulate_unitary_circuit(circuit, y.to_state());
    const CVector expected = dense_circuit_unitary(circuit) * y.to_state().amplitudes();
    CHECK((out.amplitudes() - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("unitary simulation preserves the norm") {
    Rng rng(19);
    const Circuit circuit = Circuit::random_unitary(arch_3q_chain(), rng);
    const PureState out = simulate_unitary_circuit(circuit, PureState::basis(3, 2, 5));
    CHECK(std::abs(out.amplitudes().squaredNorm() - 1.0) < 1e-9);
}

TEST_CASE("permuting gates within a layer leaves the output invariant") {
    CircuitArchitecture arch;
    arch.n = 4;
    arch.d = 2;
    arch.depth = 1;
    arch.placements = {GatePlacement{1, 1, 0, 1}, GatePlacement{1, 2, 2, 3}};
    Rng rng(23);
    const CMatrix u1 = haar_random_unitary(4, rng);
    const CMatrix u2 = haar_random_unitary(4, rng);

    CircuitArchitecture swapped = arch;
    std::swap(swapped.placements[0], swapped.placements[1]);
    swapped.placements[0].slot = 1;
    swapped.placements[1].slot = 2;

    const ProductVector y = ProductVector::random_haar(4, 2, rng);
    const PureState a = simulate_unitary_circuit(Circuit(arch, {u1, u2}), y.to_state());
    const PureState b = simulate_unitary_circuit(Circuit(swapped, {u2, u1}), y.to_state());
    CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("layer composition: simulating 1..k then k+1..depth equals 1..depth") {
    Rng rng(29);
    const Circuit circuit = Circuit::random_unitary(arch_3q_chain(), rng);
    const PureState in = PureState::basis(3, 2, 0);

    CircuitArchitecture first = arch_3q_chain();
    first.depth = 1;
    first.placements = {GatePlacement{1, 1, 0, 1}};
    first.allow_idle = true;
    CircuitArchitecture second = arch_3q_chain();
    second.depth = 1;
    second.placements = {GatePlacement{1, 1, 1, 2}};
    second.allow_idle = true;

    const PureState mid = simulate_unitary_circuit(Circuit(first, {circuit.unitaries()[0]}), in);
    const PureState split = simulate_unitary_circuit(Circuit(second, {circuit.unitaries()[1]}), mid);
    const PureState whole = simulate_unitary_circuit(circuit, in);
    CHECK((split.amplitudes() - whole.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("operation circuits with identity channels act trivially") {
    std::vector<QuantumOperation> ops(2, QuantumOperation::identity(4));
    const Circuit circuit(arch_3q_chain(), std::move(ops));
    Rng rng(31);
    const DensityMatrix rho = random_density(3, 2, rng);
    const DensityMatrix out = simulate_operation_circuit(circuit, rho);
    CHECK((out.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("unitary-Kraus operation circuits agree with unitary simulation") {
    Rng rng(37);
    const Circuit unitary = Circuit::random_unitary(arch_3q_chain(), rng);
    const Circuit operation = Circuit::to_operation_circuit(unitary);
    const PureState in = PureState::basis(3, 2, 3);
    const PureState pure_out = simulate_unitary_circuit(unitary, in);
    const DensityMatrix mixed_out =
        simulate_operation_circuit(operation, DensityMatrix::from_pure(in));
    const CMatrix expected = pure_out.amplitudes() * pure_out.amplitudes().adjoint();
    CHECK((mixed_out.matrix() - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("a depolarizing gate matches the hand-composed Kraus sum") {
    // 2-qubit circuit: one gate on (0,1) = depolarizing on qubit 0 (x) identity.
    const QuantumOperation depolarizing = QuantumOperation::depolarizing_qubit(0.4);
    std::vector<CMatrix> kraus;
    for (const CMatrix& k : depolarizing.kraus()) {
        kraus.push_back(kron(k, CMatrix::Identity(2, 2)));
    }
    const Circuit circuit(arch_2q(), {QuantumOperation(kraus)});
    const DensityMatrix in = DensityMatrix::from_pure(PureState::basis(2, 2, 0));
    const DensityMatrix out = simulate_operation_circuit(circuit, in);

    CMatrix expected = CMatrix::Zero(4, 4);
    for (const CMatrix& k : kraus) expected += k * in.matrix() * k.adjoint();
    CHECK((out.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("operation circuits never increase the trace") {
    Rng rng(41);
    std::vector<QuantumOperation> ops;
    ops.push_back(random_channel(4, 2, rng));
    const CMatrix k = std::sqrt(0.7) * haar_random_unitary(4, rng);
    ops.push_back(QuantumOperation({k}));
    const Circuit circuit(arch_3q_chain(), std::move(ops));
    const DensityMatrix out =
        simulate_operation_circuit(circuit, DensityMatrix::from_pure(PureState::basis(3, 2, 1)));
    CHECK(out.trace() <= 1.0 + 1e-9);
}

TEST_CASE("circuit_output_probability on the identity circuit") {
    const Circuit circuit = Circuit::identity(arch_2q());
    const ProductVector b0 = ProductVector::basis(2, 2, 0);
    const ProductVector b3 = ProductVector::basis(2, 2, 3);
    CHECK(circuit_output_probability(circuit, b0, b0) == doctest::Approx(1.0));
    CHECK(circuit_output_probability(circuit, b3, b0) == doctest::Approx(0.0));
}

TEST_CASE("mode and dimension mismatches are rejected") {
    const Circuit unitary = Circuit::identity(arch_2q());
    CHECK_THROWS_AS(simulate_operation_circuit(unitary, DensityMatrix::from_pure(
                                                            PureState::basis(2, 2, 0))),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_unitary_circuit(unitary, PureState::basis(3, 2, 0)),
                    std::invalid_argument);
}

TEST_CASE("enumerate_architectures small counts") {
    CHECK(enumerate_architectures(2, 2, 1, 1).size() == 1);
    // Perfect matchings of 4 qudits.
    CHECK(enumerate_architectures(4, 2, 1, 2).size() == 3);
    // Ordered pairs of distinct overlappable pairs covering {0,1,2}.
    CHECK(enumerate_architectures(3, 2, 2, 2).size() == 6);
    // With idle qudits allowed the same-pair repeats join in.
    CHECK(enumerate_architectures(3, 2, 2, 2, true).size() == 9);
}

TEST_CASE("enumerate_architectures output is canonical, valid and duplicate-free") {
    const auto archs = enumerate_architectures(4, 2, 2, 3);
    std::set<std::string> seen;
    for (const CircuitArchitecture& arch : archs) {
        CHECK(validate_architecture(arch).empty());
        CHECK(arch.size() == 3);
        CHECK(arch.depth == 2);
        CHECK(seen.insert(arch.to_string()).second);
    }
    CHECK(!archs.empty());
}

TEST_CASE("enumerate_architectures rejects infeasible parameters") {
    CHECK_THROWS_AS(enumerate_architectures(4, 2, 2, 1), std::invalid_argument); // empty layer
    CHECK_THROWS_AS(enumerate_architectures(4, 2, 1, 3), std::invalid_argument); // > n/2 per layer
}

TEST_CASE("count_architecture_bound evaluates the crude counting formula") {
    CHECK(count_architecture_bound(2, 1, 1).exact_decimal == "2");
    const ArchitectureCountBound b = count_architecture_bound(4, 1, 2);
    CHECK(b.exact_decimal == "48");
    CHECK(b.value == doctest::Approx(48.0));
    CHECK(enumerate_architectures(4, 2, 1, 2).size() <= 48);
    CHECK_THROWS_AS(count_architecture_bound(2, 2, 1), std::invalid_argument);
}

TEST_CASE("enumeration never exceeds the counting bound") {
    for (int n = 2; n <= 4; ++n) {
        for (int size = 1; size <= 4; ++size) {
            for (int depth = 1; depth <= size; ++depth) {
                if (size > depth * (n / 2)) continue;
                for (bool idle : {false, true}) {
                    const auto archs = enumerate_architectures(n, 2, depth, size, idle);
                    const ArchitectureCountBound bound = count_architecture_bound(n, depth, size);
                    CHECK(static_cast<double>(archs.size()) <= bound.value);
                }
            }
        }
    }
}

TEST_CASE("circuit JSON round-trips") {
    Rng rng(43);
    const Circuit circuit = Circuit::random_unitary(arch_4q(), rng);
    const std::string text = circuit_to_json(circuit);
    const Circuit parsed = parse_circuit(text);
    CHECK(parsed.architecture().to_string() == circuit.architecture().to_string());
    for (int g = 0; g < 3; ++g) {
        CHECK((parsed.unitaries()[g] - circuit.unitaries()[g]).cwiseAbs().maxCoeff() < 1e-12);
    }

    const Circuit op_circuit = Circuit::to_operation_circuit(circuit);
    const Circuit op_parsed = parse_circuit(circuit_to_json(op_circuit));
    CHECK(op_parsed.kind() == GateKind::Operation);
}

TEST_CASE("circuit parser reports line-level diagnostics") {
    SUBCASE("syntax error carries a line number") {
        try {
            parse_circuit("{\n  \"d\": 2,\n  \"n\": 2 BROKEN\n}");
            FAIL("expected CircuitParseError");
        } catch (const CircuitParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("non-unitary gate is rejected with the gate's line") {
        std::ostringstream text;
        text << "{\n\"d\": 2,\n\"n\": 2,\n\"depth\": 1,\n\"layers\": [[\n";
        text << "{\"qudits\": [0,1],\n\"unitary\": {\"re\": [";
        // 2 * identity: right shape, wrong unitarity.
        for (int r = 0; r < 4; ++r) {
            text << (r ? "," : "") << "[";
            for (int c = 0; c < 4; ++c) text << (c ? "," : "") << (r == c ? 2 : 0);
            text << "]";
        }
        text << "], \"im\": [";
        for (int r = 0; r < 4; ++r) {
            text << (r ? "," : "") << "[0,0,0,0]";
        }
        text << "]}}\n]]}\n";
        CHECK_THROWS_AS(parse_circuit(text.str()), CircuitParseError);
    }
    SUBCASE("overlapping pairs in a layer are rejected") {
        std::string identity4 = "{\"re\": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]], "
                                "\"im\": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}";
        std::string text = "{\"d\": 2, \"n\": 4, \"depth\": 1, \"layers\": [["
                           "{\"qudits\": [0,1], \"unitary\": " + identity4 + "},"
                           "{\"qudits\": [1,2], \"unitary\": " + identity4 + "}]]}";
        CHECK_THROWS_WITH_AS(parse_circuit(text), doctest::Contains("share qudit"),
                             CircuitParseError);
    }
}
