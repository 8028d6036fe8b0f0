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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpdim/circuit.hpp"
#include "qpdim/errors.hpp"

namespace qpdim {

// -------------------------------------------------------------------------
// Variables
//
// A circuit architecture of size gamma on n qudits of dimension d owns
//   gamma * d^4 complex gate variables   g{i}[r,c]  (entries of the plugged
//                                                    gate unitaries),
//   d * n complex measurement variables  x{q}[j]    (local amplitudes of the
//                                                    product vector x), and
//   d * n complex input variables        y{q}[j]    (local amplitudes of the
//                                                    product vector y; only
//                                                    in the variable-input
//                                                    polynomials).
// Doubling each complex variable into its real and imaginary part yields the
// 2*gamma*d^4 (+ 2dn + 2dn) real variables whose degrees the degree reports
// certify: a factor v or conj(v) contributes 1 to the real-variable degree.
// -------------------------------------------------------------------------

enum class VarGroup : std::uint8_t { Gate = 0, Measurement = 1, Input = 2 };

struct VariableInfo {
    VarGroup group;
    int owner; // gate index, or qudit index
    int row;   // gate row in [0, d^2); 0 for vector variables
    int col;   // gate column in [0, d^2), or level in [0, d)
};

class VariableRegistry {
  public:
    static std::shared_ptr<const VariableRegistry> make(const CircuitArchitecture& arch,
                                                        bool with_input_vars);

    int n() const { return n_; }
    int d() const { return d_; }
    int gate_count() const { return gamma_; }
    bool has_input_vars() const { return has_input_; }

    int count() const { return static_cast<int>(vars_.size()); }
    int group_count(VarGroup group) const;

    int gate_var(int gate, int row, int col) const;
    int measurement_var(int qudit, int level) const;
    int input_var(int qudit, int level) const;

    const VariableInfo& info(int var) const { return vars_.at(var); }
    std::string name(int var) const;

  private:
    VariableRegistry() = default;
    int n_ = 0;
    int d_ = 0;
    int gamma_ = 0;
    bool has_input_ = false;
    int gate_dim_ = 0;
    int meas_base_ = 0;
    int input_base_ = 0;
    std::vector<VariableInfo> vars_;
};

// Real-variable degrees per group (a factor v or conj(v) counts 1); `total`
// is their sum. For a holomorphic polynomial such as the amplitude q these
// coincide with its complex-variable degrees.
struct DegreeReport {
    int gate = 0;
    int measurement = 0;
    int input = 0;
    int total = 0;
};

// One product of variable powers; conjugated factors are tracked separately
// so |q|^2 can be expanded without leaving the complex-variable picture.
struct MonomialFactor {
    std::int32_t var = 0;
    std::uint8_t pow = 0;
    std::uint8_t conj_pow = 0;

    friend auto operator<=>(const MonomialFactor&, const MonomialFactor&) = default;
};

class Monomial {
  public:
    Monomial() = default; // the constant monomial
    static Monomial variable(int var, bool conjugated = false);

    const std::vector<MonomialFactor>& factors() const { return factors_; }
    Monomial times(const Monomial& other) const;
    Monomial times_var(int var, bool conjugated = false) const;
    // Swaps plain and conjugated powers (the monomial of the conjugate).
    Monomial conjugated() const;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

  private:
    std::vector<MonomialFactor> factors_; // sorted by var
};

// Values for evaluation / substitution, indexed by variable id; unset entries
// leave the variable symbolic (substitute) or raise an error (evaluate).
class PolyAssignment {
  public:
    explicit PolyAssignment(const VariableRegistry& registry)
        : values_(registry.count()) {}

    void set(int var, Complex value) { values_.at(var) = value; }
    void set_gates(const VariableRegistry& registry, const std::vector<CMatrix>& gates);
    void set_gates(const VariableRegistry& registry, const Circuit& circuit);
    void set_measurement(const VariableRegistry& registry, const ProductVector& x);
    void set_input(const VariableRegistry& registry, const ProductVector& y);

    const std::optional<Complex>& operator[](int var) const { return values_[var]; }

  private:
    std::vector<std::optional<Complex>> values_;
};

// Multivariate polynomial with complex coefficients over a shared registry.
// Held canonically: monomials ordered, no zero coefficients stored.
class SparsePolynomial {
  public:
    explicit SparsePolynomial(std::shared_ptr<const VariableRegistry> registry)
        : registry_(std::move(registry)) {}

    static SparsePolynomial constant(std::shared_ptr<const VariableRegistry> registry,
                                     Complex value);
    static SparsePolynomial variable(std::shared_ptr<const VariableRegistry> registry, int var,
                                     bool conjugated = false);

    const VariableRegistry& registry() const { return *registry_; }
    std::shared_ptr<const VariableRegistry> registry_ptr() const { return registry_; }
    const std::map<Monomial, Complex>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    void add_term(const Monomial& monomial, Complex coefficient);
    SparsePolynomial& operator+=(const SparsePolynomial& other);
    SparsePolynomial times_var(int var, bool conjugated = false) const;
    SparsePolynomial times(const SparsePolynomial& other, std::size_t max_terms = 0) const;
    SparsePolynomial conjugated() const;
    void scale(Complex factor);
    // Drops coefficients below the floating-point expansion noise floor.
    void prune(double eps = 1e-14);

    Complex evaluate(const PolyAssignment& assignment) const;
    SparsePolynomial substituted(const PolyAssignment& fixed) const;

    DegreeReport degree_report() const;
    // No complex variable may appear with plain or conjugated power > 1.
    bool multilinear() const;
    // c[conj(m)] == conj(c[m]) for every monomial: equivalent to the
    // real/imaginary-part expansion having real coefficients.
    bool conjugate_symmetric(double tol = 1e-12) const;

    // One monomial per line: "coeff_re coeff_im [var:exp ...]", conjugated
    // factors prefixed with '~'; canonical order, stable across runs.
    std::string dump() const;

  private:
    std::shared_ptr<const VariableRegistry> registry_;
    std::map<Monomial, Complex> terms_;
};

DegreeReport degree_report(const SparsePolynomial& poly);

// Symbolic size guards. Amplitude construction throws BudgetError beyond
// max_amplitude_terms; |q|^2 expansion is skipped (the polynomial stays in
// implicit form) beyond max_expanded_terms.
struct PolynomialBudget {
    std::size_t max_amplitude_terms = 1u << 20;
    std::size_t max_expanded_terms = 300000;
};

// Amplitude polynomial q^z of the architecture: the circuit-output amplitude
//   q^z(g, x) = <z| U_N |x>
// as a polynomial in the gate entries (multilinear, degree <= gamma: one
// entry per gate) and the local amplitudes of the product vector x (degree
// <= n), built by propagating the bra <z| through layers depth..1.
SparsePolynomial amplitude_polynomial(const CircuitArchitecture& arch, std::int64_t z_index,
                                      const PolynomialBudget& budget = {});

// Variable-input amplitude q'(g, x, y) = sum_z conj(y_z) q^z(g, x) = <y|U_N|x>,
// with y_z the product amplitude of the input variables. Degree <= n in the
// y-variables; fixing y to a basis state z recovers q^z.
SparsePolynomial variable_input_amplitude(const CircuitArchitecture& arch,
                                          const PolynomialBudget& budget = {});

// Probability polynomial p = q * conj(q). Evaluation is always exact via
// |q(.)|^2; the expanded monomial form over doubled variables is materialized
// when it fits the budget. Degrees double those of q (exactly: the top
// bidegree diagonal terms |c|^2 cannot cancel).
class ProbabilityPolynomial {
  public:
    ProbabilityPolynomial(SparsePolynomial amplitude, std::optional<SparsePolynomial> expanded)
        : amplitude_(std::move(amplitude)), expanded_(std::move(expanded)) {}

    const SparsePolynomial& amplitude() const { return amplitude_; }
    const std::optional<SparsePolynomial>& expanded() const { return expanded_; }
    const VariableRegistry& registry() const { return amplitude_.registry(); }

    double evaluate(const PolyAssignment& assignment) const;
    DegreeReport degree_report() const;

  private:
    SparsePolynomial amplitude_;
    std::optional<SparsePolynomial> expanded_;
};

// p^z = |q^z|^2: the probability of measuring basis outcome z on the circuit
// output for product input x, as a polynomial of real-variable degree <= 2*gamma
// in the gate variables and <= 2n in the x-variables.
ProbabilityPolynomial probability_polynomial(const CircuitArchitecture& arch, std::int64_t z_index,
                                             const PolynomialBudget& budget = {});

// p' = |q'|^2 with variable product input y: degree <= 2n in the y-variables
// as well. p'(g, x, y) is the probability that the circuit maps the product
// input x to the product measurement outcome y.
ProbabilityPolynomial variable_input_polynomial(const CircuitArchitecture& arch,
                                                const PolynomialBudget& budget = {});

} // namespace qpdim
