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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpdim/errors.hpp"
#include "qpdim/qudit.hpp"

namespace qpdim {

// Finite matrix of function values: rows are functions, columns are
// evaluation points. The substrate of every shattering check.
struct FunctionTable {
    struct Row {
        std::string label;
        std::vector<double> values;
    };

    std::vector<std::string> point_labels;
    std::vector<Row> rows;

    int point_count() const { return static_cast<int>(point_labels.size()); }
    int row_count() const { return static_cast<int>(rows.size()); }

    // CSV: header "function,<p1>,...,<pk>", one "label,v1,...,vk" row per
    // function, 17 significant digits.
    void write(std::ostream& out) const;
    static FunctionTable read(std::istream& in);
};

// Certificate that (points, thresholds) are pseudo-shattered: for every
// subset mask C of the points there is a row whose "value >= threshold"
// pattern is exactly C (ties count as "in C").
struct ShatterWitness {
    std::vector<int> points;
    std::vector<double> thresholds;
    std::vector<std::int32_t> row_for_pattern; // size 2^k, indexed by mask
};

struct ShatterCheck {
    bool shattered = false;
    std::vector<std::int32_t> row_for_pattern; // -1 where no row realizes the mask
};

// Exhaustive check of all 2^k subsets of the given points against the given
// thresholds (k <= 24).
ShatterCheck is_pseudo_shattered(const FunctionTable& table, const std::vector<int>& points,
                                 const std::vector<double>& thresholds);

// Work cap for the exhaustive witness search; the count is
// (point subsets) x (threshold combinations) x rows.
struct SearchBudget {
    std::uint64_t max_checks = 50'000'000;
};

// Exhaustive search for a pseudo-shattered set of k points. Thresholds range
// over each point's distinct values, which is complete for the ">=" predicate:
// any witness can be converted into one with value thresholds by raising each
// threshold to the least value above it. Throws BudgetError when the search
// space exceeds the budget.
std::optional<ShatterWitness> find_shattered_set(const FunctionTable& table, int k,
                                                 const SearchBudget& budget = {});

// Margin version: value >= threshold + alpha on C, <= threshold - alpha off C.
bool fat_shattering_check(const FunctionTable& table, const std::vector<int>& points,
                          const std::vector<double>& thresholds, double alpha);

// Sign-assignment counts for m real polynomials of the given degree in n_vars
// variables: (4e*degree*m/n_vars)^n_vars consistent non-zero assignments and
// (8e*degree*m/n_vars)^n_vars consistent assignments, computed in the log
// domain. Requires m >= n_vars >= 1 and degree >= 1.
struct WarrenCount {
    double log2_nonzero = 0.0;
    double log2_all = 0.0;
    double nonzero = 0.0; // +inf when the value exceeds double range
    double all = 0.0;
};
WarrenCount warren_count(std::int64_t n_vars, std::int64_t degree, std::int64_t m);

// Pseudo-dimension bound for a fixed architecture: 8 d^4 gamma log2(16 e gamma).
double bound_fixed(int d, std::int64_t gamma);

// Variable-architecture bound, in the explicit pre-Stirling form
//   8 d^4 gamma log2(16 e gamma * gamma! depth^(gamma-depth)/(gamma-depth)! * (n!)^depth),
// evaluated with log-gamma so no factorial overflows.
double bound_variable(int d, std::int64_t gamma, std::int64_t depth, int n);

// Same bound for circuits of quantum operations: d^8 replaces d^4.
double bound_operations(int d, std::int64_t gamma, std::int64_t depth, int n);

// Formula instantiation strings for the calculators above (CLI output).
std::string describe_bound_fixed(int d, std::int64_t gamma);
std::string describe_bound_variable(int d, std::int64_t gamma, std::int64_t depth, int n);
std::string describe_bound_operations(int d, std::int64_t gamma, std::int64_t depth, int n);

// The uniform-superposition state family on n+1 qubits: for a subset C of the
// 2^n basis labels {x0}, |psi_C> is the uniform superposition over C, and
// |psi_empty> = |0...01>. Table points are the 2^n labels x0; the row of C
// takes value 1/|C| on members and 0 elsewhere; every subset of the labels,
// including the empty one, contributes a row (2^(2^n) rows total).
FunctionTable state_family_functions(int n); // budget: n <= 4

// |psi_C> itself; members are indices x in [0, 2^n) naming the labels x0.
PureState state_family_state(int n, const std::vector<int>& members);

// Uniform thresholds 1/2^n pseudo-shatter all 2^n points of the family table.
std::vector<double> state_family_thresholds(int n);

// Sample-complexity estimate for learning circuits of `size` gates and depth
// `depth` on d-level systems:
//   m = ceil((1/eps) * (F * log2(F/((beta-alpha)*eps))^2 + log2(1/confidence)))
// with unit leading constant, where the fat-shattering term F is
// bound_operations(d, size, depth, 2*size) — the pseudo-dimension bound with
// the qudit count eliminated through n <= 2*gamma (every qudit is touched by
// a gate, so a size-gamma circuit spans at most 2*gamma qudits).
struct SampleComplexity {
    double fat_bound = 0.0;
    double log_term = 0.0;
    double m_real = 0.0;
    std::int64_t m = 0;
    std::string formula;
};
SampleComplexity sample_complexity(std::int64_t depth, std::int64_t size, int d, double epsilon,
                                   double confidence, double alpha, double beta);

// Randomized search for a pseudo-shattered set of size k among the output
// distributions of a single 2-qudit gate (n = 2 qudits, input |00>, random
// product measurement points). Reports the outcome; an unsuccessful search is
// inconclusive, not a refutation.
struct SingleGateSearchReport {
    bool found = false;
    int gates_sampled = 0;
    int point_count = 0;
    std::optional<ShatterWitness> witness;
};
SingleGateSearchReport single_gate_shatter_search(int d, int k, int max_gate_samples,
                                                  int point_count, std::uint64_t seed);

} // namespace qpdim
