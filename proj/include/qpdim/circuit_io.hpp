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

#include <stdexcept>
#include <string>

#include "qpdim/circuit.hpp"

namespace qpdim {

// Parse/validation failure with a 1-based line number into the source text
// (0 when no position was attributable).
class CircuitParseError : public std::runtime_error {
  public:
    CircuitParseError(std::string message, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// Circuit file format (JSON):
//   {
//     "d": 2, "n": 3, "depth": 2, "allow_idle": false,
//     "layers": [
//       [ {"qudits": [0,1], "unitary": {"re": [[...]], "im": [[...]]}} ],
//       [ {"qudits": [1,2], "kraus": [{"re": [[...]], "im": [[...]]}, ...]} ]
//     ]
//   }
// All gates must be of one kind (unitary or kraus). Matrices are d^2 x d^2.
Circuit parse_circuit(const std::string& text);
Circuit load_circuit(const std::string& path);

std::string circuit_to_json(const Circuit& circuit);
void save_circuit(const Circuit& circuit, const std::string& path);

} // namespace qpdim
