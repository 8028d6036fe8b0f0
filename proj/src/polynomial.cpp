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

#include "qpdim/polynomial.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qpdim {

// ---------------------------------------------------------------- registry

std::shared_ptr<const VariableRegistry> VariableRegistry::make(const CircuitArchitecture& arch,
                                                               bool with_input_vars) {
    require_valid_architecture(arch);
    auto registry = std::shared_ptr<VariableRegistry>(new VariableRegistry());
    registry->n_ = arch.n;
    registry->d_ = arch.d;
    registry->gamma_ = arch.size();
    registry->has_input_ = with_input_vars;
    registry->gate_dim_ = arch.d * arch.d;

    const int gd = registry->gate_dim_;
    for (int g = 0; g < registry->gamma_; ++g) {
        for (int r = 0; r < gd; ++r) {
            for (int c = 0; c < gd; ++c) {
                registry->vars_.push_back(VariableInfo{VarGroup::Gate, g, r, c});
            }
        }
    }
    registry->meas_base_ = static_cast<int>(registry->vars_.size());
    for (int q = 0; q < arch.n; ++q) {
        for (int j = 0; j < arch.d; ++j) {
            registry->vars_.push_back(VariableInfo{VarGroup::Measurement, q, 0, j});
        }
    }
    registry->input_base_ = static_cast<int>(registry->vars_.size());
    if (with_input_vars) {
        for (int q = 0; q < arch.n; ++q) {
            for (int j = 0; j < arch.d; ++j) {
                registry->vars_.push_back(VariableInfo{VarGroup::Input, q, 0, j});
            }
        }
    }
    return registry;
}

int VariableRegistry::group_count(VarGroup group) const {
    switch (group) {
    case VarGroup::Gate:
        return meas_base_;
    case VarGroup::Measurement:
        return input_base_ - meas_base_;
    case VarGroup::Input:
        return count() - input_base_;
    }
    return 0;
}

int VariableRegistry::gate_var(int gate, int row, int col) const {
    const int gd = gate_dim_;
    if (gate < 0 || gate >= gamma_ || row < 0 || row >= gd || col < 0 || col >= gd) {
        throw std::invalid_argument("VariableRegistry: gate variable out of range");
    }
    return (gate * gd + row) * gd + col;
}

int VariableRegistry::measurement_var(int qudit, int level) const {
    if (qudit < 0 || qudit >= n_ || level < 0 || level >= d_) {
        throw std::invalid_argument("VariableRegistry: measurement variable out of range");
    }
    return meas_base_ + qudit * d_ + level;
}

int VariableRegistry::input_var(int qudit, int level) const {
    if (!has_input_) throw std::invalid_argument("VariableRegistry: no input variables");
    if (qudit < 0 || qudit >= n_ || level < 0 || level >= d_) {
        throw std::invalid_argument("VariableRegistry: input variable out of range");
    }
    return input_base_ + qudit * d_ + level;
}

std::string VariableRegistry::name(int var) const {
    const VariableInfo& v = info(var);
    std::ostringstream out;
    switch (v.group) {
    case VarGroup::Gate:
        out << 'g' << v.owner << '[' << v.row << ',' << v.col << ']';
        break;
    case VarGroup::Measurement:
        out << 'x' << v.owner << '[' << v.col << ']';
        break;
    case VarGroup::Input:
        out << 'y' << v.owner << '[' << v.col << ']';
        break;
    }
    return out.str();
}

// ---------------------------------------------------------------- monomial

Monomial Monomial::variable(int var, bool conjugated) {
    Monomial m;
    m.factors_.push_back(MonomialFactor{var, static_cast<std::uint8_t>(conjugated ? 0 : 1),
                                        static_cast<std::uint8_t>(conjugated ? 1 : 0)});
    return m;
}

Monomial Monomial::times(const Monomial& other) const {
    Monomial out;
    out.factors_.reserve(factors_.size() + other.factors_.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < factors_.size() || j < other.factors_.size()) {
        if (j >= other.factors_.size() ||
            (i < factors_.size() && factors_[i].var < other.factors_[j].var)) {
            out.factors_.push_back(factors_[i++]);
        } else if (i >= factors_.size() || other.factors_[j].var < factors_[i].var) {
            out.factors_.push_back(other.factors_[j++]);
        } else {
            MonomialFactor merged = factors_[i++];
            merged.pow = static_cast<std::uint8_t>(merged.pow + other.factors_[j].pow);
            merged.conj_pow = static_cast<std::uint8_t>(merged.conj_pow + other.factors_[j].conj_pow);
            ++j;
            out.factors_.push_back(merged);
        }
    }
    return out;
}

Monomial Monomial::times_var(int var, bool conjugated) const {
    return times(variable(var, conjugated));
}

Monomial Monomial::conjugated() const {
    Monomial out = *this;
    for (MonomialFactor& f : out.factors_) std::swap(f.pow, f.conj_pow);
    return out;
}

// -------------------------------------------------------------- assignment

void PolyAssignment::set_gates(const VariableRegistry& registry,
                               const std::vector<CMatrix>& gates) {
    if (static_cast<int>(gates.size()) != registry.gate_count()) {
        throw std::invalid_argument("PolyAssignment: gate count mismatch");
    }
    const int gd = registry.d() * registry.d();
    for (int g = 0; g < registry.gate_count(); ++g) {
        if (gates[g].rows() != gd || gates[g].cols() != gd) {
            throw std::invalid_argument("PolyAssignment: gate must be d^2 x d^2");
        }
        for (int r = 0; r < gd; ++r) {
            for (int c = 0; c < gd; ++c) values_[registry.gate_var(g, r, c)] = gates[g](r, c);
        }
    }
}

void PolyAssignment::set_gates(const VariableRegistry& registry, const Circuit& circuit) {
    set_gates(registry, circuit.unitaries());
}

void PolyAssignment::set_measurement(const VariableRegistry& registry, const ProductVector& x) {
    if (x.n() != registry.n() || x.d() != registry.d()) {
        throw std::invalid_argument("PolyAssignment: measurement vector dimension mismatch");
    }
    for (int q = 0; q < x.n(); ++q) {
        for (int j = 0; j < x.d(); ++j) values_[registry.measurement_var(q, j)] = x.locals()[q][j];
    }
}

void PolyAssignment::set_input(const VariableRegistry& registry, const ProductVector& y) {
    if (y.n() != registry.n() || y.d() != registry.d()) {
        throw std::invalid_argument("PolyAssignment: input vector dimension mismatch");
    }
    for (int q = 0; q < y.n(); ++q) {
        for (int j = 0; j < y.d(); ++j) values_[registry.input_var(q, j)] = y.locals()[q][j];
    }
}

// -------------------------------------------------------------- polynomial

SparsePolynomial SparsePolynomial::constant(std::shared_ptr<const VariableRegistry> registry,
                                            Complex value) {
    SparsePolynomial p(std::move(registry));
    p.add_term(Monomial{}, value);
    return p;
}

SparsePolynomial SparsePolynomial::variable(std::shared_ptr<const VariableRegistry> registry,
                                            int var, bool conjugated) {
    SparsePolynomial p(std::move(registry));
    p.add_term(Monomial::variable(var, conjugated), 1.0);
    return p;
}

void SparsePolynomial::add_term(const Monomial& monomial, Complex coefficient) {
    if (coefficient == Complex(0.0, 0.0)) return;
    auto [it, inserted] = terms_.emplace(monomial, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
    }
}

SparsePolynomial& SparsePolynomial::operator+=(const SparsePolynomial& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

SparsePolynomial SparsePolynomial::times_var(int var, bool conjugated) const {
    SparsePolynomial out(registry_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m.times_var(var, conjugated), c);
    return out;
}

SparsePolynomial SparsePolynomial::times(const SparsePolynomial& other,
                                         std::size_t max_terms) const {
    SparsePolynomial out(registry_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : other.terms_) {
            out.add_term(ma.times(mb), ca * cb);
            if (max_terms != 0 && out.terms_.size() > max_terms) {
                throw BudgetError("polynomial product exceeds the term budget");
            }
        }
    }
    return out;
}

SparsePolynomial SparsePolynomial::conjugated() const {
    SparsePolynomial out(registry_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m.conjugated(), std::conj(c));
    return out;
}

void SparsePolynomial::scale(Complex factor) {
    if (factor == Complex(0.0, 0.0)) {
        terms_.clear();
        return;
    }
    for (auto& [m, c] : terms_) c *= factor;
}

void SparsePolynomial::prune(double eps) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < eps) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

Complex SparsePolynomial::evaluate(const PolyAssignment& assignment) const {
    Complex total = 0.0;
    for (const auto& [m, c] : terms_) {
        Complex term = c;
        for (const MonomialFactor& f : m.factors()) {
            const std::optional<Complex>& value = assignment[f.var];
            if (!value.has_value()) {
                throw std::invalid_argument("evaluate: variable " + registry_->name(f.var) +
                                            " has no assigned value");
            }
            for (int k = 0; k < f.pow; ++k) term *= *value;
            for (int k = 0; k < f.conj_pow; ++k) term *= std::conj(*value);
        }
        total += term;
    }
    return total;
}

SparsePolynomial SparsePolynomial::substituted(const PolyAssignment& fixed) const {
    SparsePolynomial out(registry_);
    for (const auto& [m, c] : terms_) {
        Complex coeff = c;
        Monomial kept;
        for (const MonomialFactor& f : m.factors()) {
            const std::optional<Complex>& value = fixed[f.var];
            if (value.has_value()) {
                for (int k = 0; k < f.pow; ++k) coeff *= *value;
                for (int k = 0; k < f.conj_pow; ++k) coeff *= std::conj(*value);
            } else {
                for (int k = 0; k < f.pow; ++k) kept = kept.times_var(f.var, false);
                for (int k = 0; k < f.conj_pow; ++k) kept = kept.times_var(f.var, true);
            }
        }
        out.add_term(kept, coeff);
    }
    out.prune();
    return out;
}

DegreeReport SparsePolynomial::degree_report() const {
    DegreeReport report;
    for (const auto& [m, c] : terms_) {
        DegreeReport current;
        for (const MonomialFactor& f : m.factors()) {
            const int degree = f.pow + f.conj_pow;
            switch (registry_->info(f.var).group) {
            case VarGroup::Gate:
                current.gate += degree;
                break;
            case VarGroup::Measurement:
                current.measurement += degree;
                break;
            case VarGroup::Input:
                current.input += degree;
                break;
            }
            current.total += degree;
        }
        report.gate = std::max(report.gate, current.gate);
        report.measurement = std::max(report.measurement, current.measurement);
        report.input = std::max(report.input, current.input);
        report.total = std::max(report.total, current.total);
    }
    return report;
}

bool SparsePolynomial::multilinear() const {
    for (const auto& [m, c] : terms_) {
        for (const MonomialFactor& f : m.factors()) {
            if (f.pow > 1 || f.conj_pow > 1) return false;
        }
    }
    return true;
}

bool SparsePolynomial::conjugate_symmetric(double tol) const {
    for (const auto& [m, c] : terms_) {
        const auto partner = terms_.find(m.conjugated());
        if (partner == terms_.end()) {
            if (std::abs(c) > tol) return false;
            continue;
        }
        if (std::abs(partner->second - std::conj(c)) > tol) return false;
    }
    return true;
}

namespace {

std::string format_double17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

} // namespace

std::string SparsePolynomial::dump() const {
    std::ostringstream out;
    for (const auto& [m, c] : terms_) {
        out << format_double17(c.real()) << ' ' << format_double17(c.imag());
        for (const MonomialFactor& f : m.factors()) {
            if (f.pow > 0) out << ' ' << registry_->name(f.var) << ':' << int(f.pow);
            if (f.conj_pow > 0) out << ' ' << '~' << registry_->name(f.var) << ':' << int(f.conj_pow);
        }
        out << '\n';
    }
    return out.str();
}

DegreeReport degree_report(const SparsePolynomial& poly) { return poly.degree_report(); }

// ---------------------------------------------------------------- builders

namespace {

// Shared layer-propagation core: starting from a bra coefficient row over the
// d^n basis indices, multiplies through layers depth..1 and finally contracts
// with the product-vector monomials of x.
SparsePolynomial propagate_bra_row(const CircuitArchitecture& arch,
                                   std::vector<SparsePolynomial> row,
                                   const std::shared_ptr<const VariableRegistry>& registry,
                                   const PolynomialBudget& budget) {
    const int n = arch.n;
    const int d = arch.d;
    const std::int64_t dim = dim_pow(d, n);

    std::size_t total_terms = 0;
    for (const SparsePolynomial& entry : row) total_terms += entry.term_count();

    for (int layer = arch.depth; layer >= 1; --layer) {
        for (int g : arch.layer_gates(layer)) {
            const GatePlacement& p = arch.placements[g];
            const std::int64_t stride_a = dim_pow(d, n - 1 - p.a);
            const std::int64_t stride_b = dim_pow(d, n - 1 - p.b);
            total_terms *= static_cast<std::size_t>(d) * d;
            if (total_terms > budget.max_amplitude_terms) {
                throw BudgetError("amplitude polynomial exceeds the symbolic term budget; "
                                  "use the circuit simulator instead");
            }
            std::vector<SparsePolynomial> next(row.size(), SparsePolynomial(registry));
            for (std::int64_t v = 0; v < dim; ++v) {
                const int va = static_cast<int>((v / stride_a) % d);
                const int vb = static_cast<int>((v / stride_b) % d);
                const std::int64_t base = v - va * stride_a - vb * stride_b;
                const int gate_col = va * d + vb;
                SparsePolynomial& target = next[v];
                for (int ra = 0; ra < d; ++ra) {
                    for (int rb = 0; rb < d; ++rb) {
                        const SparsePolynomial& source = row[base + ra * stride_a + rb * stride_b];
                        if (source.empty()) continue;
                        const int var = registry->gate_var(g, ra * d + rb, gate_col);
                        target += source.times_var(var);
                    }
                }
            }
            row.swap(next);
        }
    }

    // q = sum_b row[b] * prod_i x_i[b_i]
    SparsePolynomial q(registry);
    for (std::int64_t b = 0; b < dim; ++b) {
        if (row[b].empty()) continue;
        SparsePolynomial term = row[b];
        std::int64_t rest = b;
        for (int qudit = n - 1; qudit >= 0; --qudit) {
            const int level = static_cast<int>(rest % d);
            rest /= d;
            term = term.times_var(registry->measurement_var(qudit, level));
        }
        q += term;
    }
    q.prune();
    return q;
}

std::optional<SparsePolynomial> expand_square(const SparsePolynomial& q,
                                              const PolynomialBudget& budget) {
    const std::size_t estimate = q.term_count() * q.term_count();
    if (estimate > budget.max_expanded_terms) return std::nullopt;
    SparsePolynomial p = q.times(q.conjugated());
    p.prune();
    return p;
}

} // namespace

SparsePolynomial amplitude_polynomial(const CircuitArchitecture& arch, std::int64_t z_index,
                                      const PolynomialBudget& budget) {
    auto registry = VariableRegistry::make(arch, /*with_input_vars=*/false);
    const std::int64_t dim = dim_pow(arch.d, arch.n);
    if (z_index < 0 || z_index >= dim) {
        throw std::invalid_argument("amplitude_polynomial: z index out of range");
    }
    std::vector<SparsePolynomial> row(dim, SparsePolynomial(registry));
    row[z_index].add_term(Monomial{}, 1.0);
    return propagate_bra_row(arch, std::move(row), registry, budget);
}

SparsePolynomial variable_input_amplitude(const CircuitArchitecture& arch,
                                          const PolynomialBudget& budget) {
    auto registry = VariableRegistry::make(arch, /*with_input_vars=*/true);
    const std::int64_t dim = dim_pow(arch.d, arch.n);
    if (static_cast<std::size_t>(dim) > budget.max_amplitude_terms) {
        throw BudgetError("variable-input polynomial exceeds the symbolic term budget");
    }
    // Bra <y| = sum_z conj(y_z) <z| with y_z the product amplitude.
    std::vector<SparsePolynomial> row;
    row.reserve(dim);
    for (std::int64_t z = 0; z < dim; ++z) {
        Monomial m;
        std::int64_t rest = z;
        for (int qudit = arch.n - 1; qudit >= 0; --qudit) {
            const int level = static_cast<int>(rest % arch.d);
            rest /= arch.d;
            m = m.times_var(registry->input_var(qudit, level), /*conjugated=*/true);
        }
        SparsePolynomial entry(registry);
        entry.add_term(m, 1.0);
        row.push_back(std::move(entry));
    }
    return propagate_bra_row(arch, std::move(row), registry, budget);
}

double ProbabilityPolynomial::evaluate(const PolyAssignment& assignment) const {
    return std::norm(amplitude_.evaluate(assignment));
}

DegreeReport ProbabilityPolynomial::degree_report() const {
    if (expanded_.has_value()) return expanded_->degree_report();
    DegreeReport doubled = amplitude_.degree_report();
    doubled.gate *= 2;
    doubled.measurement *= 2;
    doubled.input *= 2;
    doubled.total *= 2;
    return doubled;
}

ProbabilityPolynomial probability_polynomial(const CircuitArchitecture& arch, std::int64_t z_index,
                                             const PolynomialBudget& budget) {
    SparsePolynomial q = amplitude_polynomial(arch, z_index, budget);
    std::optional<SparsePolynomial> expanded = expand_square(q, budget);
    return ProbabilityPolynomial(std::move(q), std::move(expanded));
}

ProbabilityPolynomial variable_input_polynomial(const CircuitArchitecture& arch,
                                                const PolynomialBudget& budget) {
    SparsePolynomial q = variable_input_amplitude(arch, budget);
    std::optional<SparsePolynomial> expanded = expand_square(q, budget);
    return ProbabilityPolynomial(std::move(q), std::move(expanded));
}

} // namespace qpdim
