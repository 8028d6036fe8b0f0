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

#include "qpdim/circuit_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace qpdim {

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

// Line of the k-th gate object (0-based), located by its mandatory "qudits"
// key in source order; keeps semantic diagnostics line-addressable without a
// position-tracking parser.
int line_of_gate(const std::string& text, int gate_index) {
    std::size_t pos = 0;
    for (int k = 0; k <= gate_index; ++k) {
        pos = text.find("\"qudits\"", pos);
        if (pos == std::string::npos) return 0;
        if (k < gate_index) ++pos;
    }
    return line_of_offset(text, pos);
}

int line_of_key(const std::string& text, const std::string& key) {
    const std::size_t pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

CMatrix matrix_from_json(const json& obj, Eigen::Index dim, const std::string& what, int line) {
    if (!obj.is_object() || !obj.contains("re") || !obj.contains("im")) {
        throw CircuitParseError(what + ": expected an object with \"re\" and \"im\"", line);
    }
    const json& re = obj.at("re");
    const json& im = obj.at("im");
    if (!re.is_array() || !im.is_array() || re.size() != static_cast<std::size_t>(dim) ||
        im.size() != static_cast<std::size_t>(dim)) {
        throw CircuitParseError(what + ": matrix must be " + std::to_string(dim) + "x" +
                                    std::to_string(dim),
                                line);
    }
    CMatrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const json& re_row = re.at(r);
        const json& im_row = im.at(r);
        if (!re_row.is_array() || !im_row.is_array() ||
            re_row.size() != static_cast<std::size_t>(dim) ||
            im_row.size() != static_cast<std::size_t>(dim)) {
            throw CircuitParseError(what + ": matrix must be " + std::to_string(dim) + "x" +
                                        std::to_string(dim),
                                    line);
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            if (!re_row.at(c).is_number() || !im_row.at(c).is_number()) {
                throw CircuitParseError(what + ": matrix entries must be numbers", line);
            }
            m(r, c) = Complex(re_row.at(c).get<double>(), im_row.at(c).get<double>());
        }
    }
    return m;
}

json matrix_to_json(const CMatrix& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json re_row = json::array();
        json im_row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re_row.push_back(m(r, c).real());
            im_row.push_back(m(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

int require_int_field(const json& root, const std::string& key, const std::string& text) {
    if (!root.contains(key)) throw CircuitParseError("missing field \"" + key + '"', 1);
    const json& v = root.at(key);
    if (!v.is_number_integer()) {
        throw CircuitParseError("field \"" + key + "\" must be an integer", line_of_key(text, key));
    }
    return v.get<int>();
}

} // namespace

Circuit parse_circuit(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CircuitParseError(std::string("JSON syntax error: ") + e.what(),
                                line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!root.is_object()) throw CircuitParseError("top level must be an object", 1);

    CircuitArchitecture arch;
    arch.d = require_int_field(root, "d", text);
    arch.n = require_int_field(root, "n", text);
    arch.depth = require_int_field(root, "depth", text);
    arch.allow_idle = root.value("allow_idle", false);
    if (arch.d < 2 || arch.n < 2 || arch.depth < 1) {
        throw CircuitParseError("need d >= 2, n >= 2, depth >= 1", line_of_key(text, "d"));
    }

    if (!root.contains("layers") || !root.at("layers").is_array()) {
        throw CircuitParseError("missing \"layers\" array", line_of_key(text, "layers"));
    }
    const json& layers = root.at("layers");
    if (layers.size() != static_cast<std::size_t>(arch.depth)) {
        throw CircuitParseError("\"depth\" does not match the number of layers",
                                line_of_key(text, "depth"));
    }

    const Eigen::Index gate_dim = static_cast<Eigen::Index>(arch.d) * arch.d;
    std::vector<CMatrix> unitaries;
    std::vector<QuantumOperation> operations;
    int flat_index = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const json& layer = layers.at(l);
        if (!layer.is_array()) {
            throw CircuitParseError("layer " + std::to_string(l + 1) + " must be an array",
                                    line_of_key(text, "layers"));
        }
        int slot = 1;
        for (const json& gate : layer) {
            const int line = line_of_gate(text, flat_index);
            const std::string where = "gate " + std::to_string(flat_index);
            if (!gate.is_object() || !gate.contains("qudits")) {
                throw CircuitParseError(where + ": expected an object with \"qudits\"", line);
            }
            const json& qudits = gate.at("qudits");
            if (!qudits.is_array() || qudits.size() != 2 || !qudits.at(0).is_number_integer() ||
                !qudits.at(1).is_number_integer()) {
                throw CircuitParseError(where + ": \"qudits\" must be a pair of integers", line);
            }
            GatePlacement p;
            p.layer = static_cast<int>(l) + 1;
            p.slot = slot++;
            p.a = qudits.at(0).get<int>();
            p.b = qudits.at(1).get<int>();
            if (p.a > p.b) std::swap(p.a, p.b);
            arch.placements.push_back(p);

            const bool has_unitary = gate.contains("unitary");
            const bool has_kraus = gate.contains("kraus");
            if (has_unitary == has_kraus) {
                throw CircuitParseError(where + ": need exactly one of \"unitary\" or \"kraus\"",
                                        line);
            }
            if (has_unitary) {
                if (!operations.empty()) {
                    throw CircuitParseError(where + ": mixes unitary and kraus gates", line);
                }
                unitaries.push_back(
                    matrix_from_json(gate.at("unitary"), gate_dim, where + ": \"unitary\"", line));
            } else {
                if (!unitaries.empty()) {
                    throw CircuitParseError(where + ": mixes unitary and kraus gates", line);
                }
                const json& kraus = gate.at("kraus");
                if (!kraus.is_array() || kraus.empty()) {
                    throw CircuitParseError(where + ": \"kraus\" must be a non-empty array", line);
                }
                std::vector<CMatrix> family;
                for (const json& k : kraus) {
                    family.push_back(matrix_from_json(k, gate_dim, where + ": \"kraus\"", line));
                }
                try {
                    operations.emplace_back(std::move(family));
                } catch (const std::invalid_argument& e) {
                    throw CircuitParseError(where + ": " + e.what(), line);
                }
            }
            ++flat_index;
        }
    }

    const std::vector<std::string> violations = validate_architecture(arch);
    if (!violations.empty()) {
        throw CircuitParseError("architecture violation: " + violations.front(),
                                line_of_key(text, "layers"));
    }
    try {
        if (!unitaries.empty()) return Circuit(std::move(arch), std::move(unitaries));
        return Circuit(std::move(arch), std::move(operations));
    } catch (const std::invalid_argument& e) {
        throw CircuitParseError(e.what(), line_of_key(text, "layers"));
    }
}

Circuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CircuitParseError("cannot open circuit file: " + path, 0);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_circuit(buffer.str());
}

std::string circuit_to_json(const Circuit& circuit) {
    const CircuitArchitecture& arch = circuit.architecture();
    json layers = json::array();
    for (int l = 1; l <= arch.depth; ++l) {
        json layer = json::array();
        for (int i : arch.layer_gates(l)) {
            const GatePlacement& p = arch.placements[i];
            json gate{{"qudits", {p.a, p.b}}};
            if (circuit.kind() == GateKind::Unitary) {
                gate["unitary"] = matrix_to_json(circuit.unitaries()[i]);
            } else {
                json family = json::array();
                for (const CMatrix& k : circuit.operations()[i].kraus()) {
                    family.push_back(matrix_to_json(k));
                }
                gate["kraus"] = std::move(family);
            }
            layer.push_back(std::move(gate));
        }
        layers.push_back(std::move(layer));
    }
    json root{{"d", arch.d},
              {"n", arch.n},
              {"depth", arch.depth},
              {"allow_idle", arch.allow_idle},
              {"layers", std::move(layers)}};
    return root.dump(2) + "\n";
}

void save_circuit(const Circuit& circuit, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write circuit file: " + path);
    out << circuit_to_json(circuit);
}

} // namespace qpdim
