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

namespace qpdim {

// A requested computation would exceed its combinatorial or symbolic size
// budget. Deliberately distinct from invalid_argument: the inputs are legal,
// the computation is just refused at this scale.
class BudgetError : public std::runtime_error {
  public:
    explicit BudgetError(const std::string& message) : std::runtime_error(message) {}
};

} // namespace qpdim
