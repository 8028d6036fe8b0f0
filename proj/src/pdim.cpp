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

#include "qpdim/pdim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "qpdim/circuit.hpp"

namespace qpdim {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string format_double17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

double log2_factorial(std::int64_t k) {
    return std::lgamma(static_cast<double>(k) + 1.0) / kLn2;
}

double exp2_or_inf(double log2_value) {
    return log2_value < 1023.0 ? std::exp2(log2_value) : std::numeric_limits<double>::infinity();
}

} // namespace

// ------------------------------------------------------------------ tables

void FunctionTable::write(std::ostream& out) const {
    out << "function";
    for (const std::string& label : point_labels) out << ',' << label;
    out << '\n';
    for (const Row& row : rows) {
        out << row.label;
        for (double v : row.values) out << ',' << format_double17(v);
        out << '\n';
    }
}

FunctionTable FunctionTable::read(std::istream& in) {
    FunctionTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("FunctionTable: empty input");
    {
        std::stringstream header(line);
        std::string cell;
        bool first = true;
        while (std::getline(header, cell, ',')) {
            if (first && cell == "function") {
                first = false;
                continue;
            }
            first = false;
            table.point_labels.push_back(cell);
        }
    }
    if (table.point_labels.empty()) throw std::invalid_argument("FunctionTable: no points");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream cells(line);
        Row row;
        if (!std::getline(cells, row.label, ',')) continue;
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                row.values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::invalid_argument("FunctionTable: bad number on line " +
                                            std::to_string(line_no));
            }
        }
        if (row.values.size() != table.point_labels.size()) {
            throw std::invalid_argument("FunctionTable: wrong value count on line " +
                                        std::to_string(line_no));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

// -------------------------------------------------------------- shattering

ShatterCheck is_pseudo_shattered(const FunctionTable& table, const std::vector<int>& points,
                                 const std::vector<double>& thresholds) {
    const int k = static_cast<int>(points.size());
    if (k < 1 || k > 24) throw std::invalid_argument("is_pseudo_shattered: need 1 <= k <= 24");
    if (thresholds.size() != points.size()) {
        throw std::invalid_argument("is_pseudo_shattered: one threshold per point required");
    }
    for (int p : points) {
        if (p < 0 || p >= table.point_count()) {
            throw std::invalid_argument("is_pseudo_shattered: point index out of range");
        }
    }
    ShatterCheck check;
    check.row_for_pattern.assign(std::size_t{1} << k, -1);
    std::size_t patterns_seen = 0;
    for (int r = 0; r < table.row_count(); ++r) {
        const std::vector<double>& values = table.rows[r].values;
        std::uint32_t mask = 0;
        for (int i = 0; i < k; ++i) {
            if (values[points[i]] >= thresholds[i]) mask |= (1u << i);
        }
        if (check.row_for_pattern[mask] < 0) {
            check.row_for_pattern[mask] = r;
            if (++patterns_seen == check.row_for_pattern.size()) break;
        }
    }
    check.shattered = patterns_seen == check.row_for_pattern.size();
    return check;
}

std::optional<ShatterWitness> find_shattered_set(const FunctionTable& table, int k,
                                                 const SearchBudget& budget) {
    const int points = table.point_count();
    if (k < 1 || k > 24) throw std::invalid_argument("find_shattered_set: need 1 <= k <= 24");
    if (k > points) throw std::invalid_argument("find_shattered_set: k exceeds the point count");

    // Distinct values per point, ascending: the complete threshold candidates.
    std::vector<std::vector<double>> candidates(points);
    for (int p = 0; p < points; ++p) {
        std::set<double> distinct;
        for (const auto& row : table.rows) distinct.insert(row.values[p]);
        candidates[p].assign(distinct.begin(), distinct.end());
    }

    // Projected work: sum over k-subsets of (product of candidate counts) x rows.
    long double projected = 0.0L;
    {
        std::vector<int> subset(k);
        for (int i = 0; i < k; ++i) subset[i] = i;
        while (true) {
            long double combos = 1.0L;
            for (int i = 0; i < k; ++i) combos *= static_cast<long double>(candidates[subset[i]].size());
            projected += combos * static_cast<long double>(table.row_count());
            int i = k - 1;
            while (i >= 0 && subset[i] == points - k + i) --i;
            if (i < 0) break;
            ++subset[i];
            for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
        }
        if (projected > static_cast<long double>(budget.max_checks)) {
            throw BudgetError("find_shattered_set: " + std::to_string(static_cast<double>(projected)) +
                              " pattern checks exceed the search budget");
        }
    }

    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) subset[i] = i;
    std::vector<double> thresholds(k);
    while (true) {
        // Necessary condition: at least 2^k distinct restricted value vectors.
        std::set<std::vector<double>> restricted;
        for (const auto& row : table.rows) {
            std::vector<double> v(k);
            for (int i = 0; i < k; ++i) v[i] = row.values[subset[i]];
            restricted.insert(std::move(v));
            if (restricted.size() >= (std::size_t{1} << k)) break;
        }
        if (restricted.size() >= (std::size_t{1} << k)) {
            std::vector<std::size_t> pick(k, 0);
            while (true) {
                for (int i = 0; i < k; ++i) thresholds[i] = candidates[subset[i]][pick[i]];
                const ShatterCheck check = is_pseudo_shattered(table, subset, thresholds);
                if (check.shattered) {
                    ShatterWitness witness;
                    witness.points = subset;
                    witness.thresholds = thresholds;
                    witness.row_for_pattern = check.row_for_pattern;
                    return witness;
                }
                int i = k - 1;
                while (i >= 0 && pick[i] + 1 == candidates[subset[i]].size()) {
                    pick[i] = 0;
                    --i;
                }
                if (i < 0) break;
                ++pick[i];
            }
        }
        int i = k - 1;
        while (i >= 0 && subset[i] == points - k + i) --i;
        if (i < 0) break;
        ++subset[i];
        for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
    return std::nullopt;
}

bool fat_shattering_check(const FunctionTable& table, const std::vector<int>& points,
                          const std::vector<double>& thresholds, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("fat_shattering_check: need alpha > 0");
    const int k = static_cast<int>(points.size());
    if (k < 1 || k > 24) throw std::invalid_argument("fat_shattering_check: need 1 <= k <= 24");
    if (thresholds.size() != points.size()) {
        throw std::invalid_argument("fat_shattering_check: one threshold per point required");
    }
    std::vector<bool> seen(std::size_t{1} << k, false);
    std::size_t patterns_seen = 0;
    for (const auto& row : table.rows) {
        std::uint32_t mask = 0;
        bool usable = true;
        for (int i = 0; i < k && usable; ++i) {
            const double v = row.values[points[i]];
            if (v >= thresholds[i] + alpha) {
                mask |= (1u << i);
            } else if (v > thresholds[i] - alpha) {
                usable = false; // value inside the margin band serves no subset
            }
        }
        if (!usable || seen[mask]) continue;
        seen[mask] = true;
        if (++patterns_seen == seen.size()) return true;
    }
    return false;
}

// ------------------------------------------------------------------ bounds

WarrenCount warren_count(std::int64_t n_vars, std::int64_t degree, std::int64_t m) {
    if (n_vars < 1) throw std::invalid_argument("warren_count: need n_vars >= 1");
    if (degree < 1) throw std::invalid_argument("warren_count: need degree >= 1");
    if (m < n_vars) throw std::invalid_argument("warren_count: need m >= n_vars");
    WarrenCount count;
    const double base_log2 = std::log2(4.0 * M_E) + std::log2(static_cast<double>(degree)) +
                             std::log2(static_cast<double>(m)) -
                             std::log2(static_cast<double>(n_vars));
    count.log2_nonzero = static_cast<double>(n_vars) * base_log2;
    count.log2_all = count.log2_nonzero + static_cast<double>(n_vars);
    count.nonzero = exp2_or_inf(count.log2_nonzero);
    count.all = exp2_or_inf(count.log2_all);
    return count;
}

double bound_fixed(int d, std::int64_t gamma) {
    if (d < 2) throw std::invalid_argument("bound_fixed: need d >= 2");
    if (gamma < 1) throw std::invalid_argument("bound_fixed: need gamma >= 1");
    const double d4 = std::pow(static_cast<double>(d), 4.0);
    return 8.0 * d4 * static_cast<double>(gamma) *
           std::log2(16.0 * M_E * static_cast<double>(gamma));
}

namespace {

// log2 of the architecture-count factor gamma! depth^(gamma-depth)/(gamma-depth)! (n!)^depth.
double log2_architecture_count(std::int64_t gamma, std::int64_t depth, int n) {
    return log2_factorial(gamma) - log2_factorial(gamma - depth) +
           static_cast<double>(gamma - depth) * std::log2(static_cast<double>(depth)) +
           static_cast<double>(depth) * log2_factorial(n);
}

double bound_variable_impl(double d_power, std::int64_t gamma, std::int64_t depth, int n) {
    const double log_term =
        std::log2(16.0 * M_E * static_cast<double>(gamma)) + log2_architecture_count(gamma, depth, n);
    return 8.0 * d_power * static_cast<double>(gamma) * log_term;
}

void check_variable_args(int d, std::int64_t gamma, std::int64_t depth, int n, const char* who) {
    if (d < 2) throw std::invalid_argument(std::string(who) + ": need d >= 2");
    if (depth < 1) throw std::invalid_argument(std::string(who) + ": need depth >= 1");
    if (gamma < depth) throw std::invalid_argument(std::string(who) + ": need depth <= gamma");
    if (n < 2) throw std::invalid_argument(std::string(who) + ": need n >= 2");
}

} // namespace

double bound_variable(int d, std::int64_t gamma, std::int64_t depth, int n) {
    check_variable_args(d, gamma, depth, n, "bound_variable");
    return bound_variable_impl(std::pow(static_cast<double>(d), 4.0), gamma, depth, n);
}

double bound_operations(int d, std::int64_t gamma, std::int64_t depth, int n) {
    check_variable_args(d, gamma, depth, n, "bound_operations");
    return bound_variable_impl(std::pow(static_cast<double>(d), 8.0), gamma, depth, n);
}

std::string describe_bound_fixed(int d, std::int64_t gamma) {
    std::ostringstream out;
    out << "8*" << d << "^4*" << gamma << "*log2(16*e*" << gamma
        << ") = " << format_double17(bound_fixed(d, gamma));
    return out.str();
}

std::string describe_bound_variable(int d, std::int64_t gamma, std::int64_t depth, int n) {
    std::ostringstream out;
    out << "8*" << d << "^4*" << gamma << "*log2(16*e*" << gamma << "*" << gamma << "!*" << depth
        << "^" << (gamma - depth) << "/" << (gamma - depth) << "!*(" << n << "!)^" << depth
        << ") = " << format_double17(bound_variable(d, gamma, depth, n));
    return out.str();
}

std::string describe_bound_operations(int d, std::int64_t gamma, std::int64_t depth, int n) {
    std::ostringstream out;
    out << "8*" << d << "^8*" << gamma << "*log2(16*e*" << gamma << "*" << gamma << "!*" << depth
        << "^" << (gamma - depth) << "/" << (gamma - depth) << "!*(" << n << "!)^" << depth
        << ") = " << format_double17(bound_operations(d, gamma, depth, n));
    return out.str();
}

// ------------------------------------------------------------ state family

namespace {

std::string basis_label(int x, int n) {
    std::string label(n + 1, '0');
    for (int i = 0; i < n; ++i) {
        if ((x >> (n - 1 - i)) & 1) label[i] = '1';
    }
    return label; // x as n bits, qubit 0 first, plus the trailing 0
}

} // namespace

FunctionTable state_family_functions(int n) {
    if (n < 1) throw std::invalid_argument("state_family_functions: need n >= 1");
    if (n > 4) {
        throw BudgetError("state_family_functions: table has 2^(2^n) rows; n <= 4 supported");
    }
    const int points = 1 << n;
    FunctionTable table;
    table.point_labels.reserve(points);
    for (int x = 0; x < points; ++x) table.point_labels.push_back(basis_label(x, n));

    const std::uint64_t subsets = std::uint64_t{1} << points;
    table.rows.reserve(subsets);
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        FunctionTable::Row row;
        row.values.assign(points, 0.0);
        if (mask == 0) {
            row.label = "C={}";
        } else {
            const int size = std::popcount(mask);
            std::string label = "C={";
            bool first = true;
            for (int x = 0; x < points; ++x) {
                if ((mask >> x) & 1) {
                    if (!first) label += '+';
                    first = false;
                    label += table.point_labels[x];
                    row.values[x] = 1.0 / static_cast<double>(size);
                }
            }
            label += '}';
            row.label = std::move(label);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

PureState state_family_state(int n, const std::vector<int>& members) {
    if (n < 1) throw std::invalid_argument("state_family_state: need n >= 1");
    const std::int64_t labels = std::int64_t{1} << n;
    std::set<int> unique(members.begin(), members.end());
    for (int x : unique) {
        if (x < 0 || x >= labels) throw std::invalid_argument("state_family_state: label out of range");
    }
    CVector amp = CVector::Zero(std::int64_t{2} << n); // 2^(n+1)
    if (unique.empty()) {
        amp[1] = 1.0; // |0...01>
    } else {
        const double weight = 1.0 / std::sqrt(static_cast<double>(unique.size()));
        for (int x : unique) amp[2 * static_cast<std::int64_t>(x)] = weight; // |x0>
    }
    return PureState(n + 1, 2, std::move(amp));
}

std::vector<double> state_family_thresholds(int n) {
    return std::vector<double>(std::size_t{1} << n, 1.0 / static_cast<double>(std::int64_t{1} << n));
}

// ------------------------------------------------------- sample complexity

SampleComplexity sample_complexity(std::int64_t depth, std::int64_t size, int d, double epsilon,
                                   double confidence, double alpha, double beta) {
    if (epsilon <= 0.0 || epsilon >= 1.0) {
        throw std::invalid_argument("sample_complexity: need epsilon in (0,1)");
    }
    if (confidence <= 0.0 || confidence >= 1.0) {
        throw std::invalid_argument("sample_complexity: need confidence in (0,1)");
    }
    if (!(alpha > 0.0 && alpha < beta && beta < 1.0)) {
        throw std::invalid_argument("sample_complexity: need 0 < alpha < beta < 1");
    }
    SampleComplexity result;
    result.fat_bound = bound_operations(d, size, depth, static_cast<int>(2 * size));
    result.log_term = std::log2(result.fat_bound / ((beta - alpha) * epsilon));
    result.m_real = (result.fat_bound * result.log_term * result.log_term +
                     std::log2(1.0 / confidence)) /
                    epsilon;
    result.m = static_cast<std::int64_t>(std::ceil(result.m_real));
    std::ostringstream formula;
    formula << "(1/" << format_double17(epsilon) << ")*(F*log2(F/((beta-alpha)*eps))^2 + log2(1/"
            << format_double17(confidence) << ")), F = " << format_double17(result.fat_bound)
            << " = bound_operations(d=" << d << ", gamma=" << size << ", depth=" << depth
            << ", n=2*gamma)";
    result.formula = formula.str();
    return result;
}

// -------------------------------------------------- single-gate experiment

SingleGateSearchReport single_gate_shatter_search(int d, int k, int max_gate_samples,
                                                  int point_count, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("single_gate_shatter_search: need d >= 2");
    if (k < 1) throw std::invalid_argument("single_gate_shatter_search: need k >= 1");
    if (point_count < k) {
        throw std::invalid_argument("single_gate_shatter_search: need at least k points");
    }
    Rng point_rng = Rng(seed).child(1);
    Rng gate_rng = Rng(seed).child(2);

    // Fixed random product measurement points on 2 qudits.
    std::vector<ProductVector> points;
    std::vector<std::string> labels;
    points.reserve(point_count);
    for (int i = 0; i < point_count; ++i) {
        points.push_back(ProductVector::random_haar(2, d, point_rng));
        labels.push_back("x" + std::to_string(i));
    }
    const PureState input = PureState::basis(2, d, 0);

    FunctionTable table;
    table.point_labels = labels;

    SingleGateSearchReport report;
    report.point_count = point_count;
    int batch = 64;
    while (report.gates_sampled < max_gate_samples) {
        const int take = std::min(batch, max_gate_samples - report.gates_sampled);
        for (int g = 0; g < take; ++g) {
            const CMatrix u = haar_random_unitary(d * d, gate_rng);
            CVector psi = input.amplitudes();
            apply_two_qudit_gate(psi, u, 0, 1, 2, d);
            FunctionTable::Row row;
            row.label = "U" + std::to_string(report.gates_sampled + g);
            row.values.reserve(point_count);
            for (const ProductVector& x : points) {
                row.values.push_back(std::norm(x.to_state().amplitudes().dot(psi)));
            }
            table.rows.push_back(std::move(row));
        }
        report.gates_sampled += take;
        try {
            auto witness = find_shattered_set(table, k);
            if (witness.has_value()) {
                report.found = true;
                report.witness = std::move(witness);
                return report;
            }
        } catch (const BudgetError&) {
            // Table grew past the exhaustive-search budget; stop extending it.
            break;
        }
        batch *= 2;
    }
    return report;
}

} // namespace qpdim
