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
#include <span>
#include <string>
#include <vector>

#include "qpdim/circuit.hpp"
#include "qpdim/pdim.hpp"

namespace qpdim {

// ((x, y), p): product measurement vector, product input vector, and the
// probability of observing x on the circuit output for input y.
struct TrainingExample {
    ProductVector x;
    ProductVector y;
    double p;
};

enum class InputDistribution { BasisUniform, HaarProduct };

struct LearningConfig {
    int n = 2;
    int d = 2;
    int size = 1;  // hypothesis gate count, promised to match the target
    int depth = 1; // hypothesis depth
    double alpha = 0.05;      // training margin
    double beta = 0.2;        // test margin
    double epsilon = 0.1;     // target error rate
    double confidence = 0.05; // PAC failure probability
    int restarts = 20;
    int iterations = 300;
    std::uint64_t seed = 1;
    InputDistribution distribution = InputDistribution::BasisUniform;
    // When set, hypotheses of any size <= size and depth <= depth are
    // searched; by default the promised (size, depth) is exact.
    bool search_smaller = false;

    void validate() const;
};

// i.i.d. samples (x, y) from the input distribution labeled with the exact
// circuit output probability (realizable data by construction).
std::vector<TrainingExample> generate_dataset(const Circuit& target, InputDistribution distribution,
                                              int m, std::uint64_t seed);

// d^2 x d^2 unitary from d^4 real parameters: exp(iH) with H the Hermitian
// matrix holding the first d^2 parameters on the diagonal and the remaining
// ones as off-diagonal real/imaginary pairs.
CMatrix unitary_from_params(std::span<const double> params, int gate_dim);
// Kraus family of `count` operators on gate_dim from a Stiefel-style polar
// retraction of a stacked (count*gate_dim) x gate_dim complex matrix.
std::vector<CMatrix> kraus_from_params(std::span<const double> params, int gate_dim, int count);

struct TrainReport {
    double train_error = 1.0; // replayed max |f(x_i,y_i) - p_i| of the returned circuit
    bool success = false;     // train_error <= alpha
    int restarts_used = 0;
    int architectures_searched = 0;
};

struct FitResult {
    Circuit hypothesis;
    TrainReport report;
};

// Proper ERM: enumerates architectures of the promised size/depth and runs
// multi-restart local descent (central-difference gradients) on the
// Hermitian-exponential gate parameterization, minimizing the maximum data
// deviation (mean-squared surrogate in the early iterations). Never throws on
// an unreached margin: the best circuit found is returned with success=false.
FitResult erm_fit(std::span<const TrainingExample> data, const LearningConfig& config);

struct EvalReport {
    double error_rate = 0.0; // estimate of P[|f_hyp - f_target| > beta]
    double ci_low = 0.0;     // 95% Wilson interval (degenerate when exhaustive)
    double ci_high = 0.0;
    bool exhaustive = false;
    std::int64_t trials = 0;
};

// Exhaustive over all basis pairs for BasisUniform (exact probability), else
// Monte-Carlo with n_test fresh samples.
EvalReport evaluate_hypothesis(const Circuit& hypothesis, const Circuit& target,
                               InputDistribution distribution, double beta, int n_test,
                               std::uint64_t seed, bool exhaustive = true);

struct ExperimentRow {
    int m = 0;
    std::uint64_t seed = 0;
    double train_err = 0.0;
    double test_err = 0.0;
    bool success = false;
    double predicted_m = 0.0;
};

struct ExperimentConfig {
    LearningConfig learn;
    std::vector<int> m_grid{25, 50, 100, 200};
    int seeds_per_m = 10;
    // Plumbing check: skip fitting and score the target against itself.
    bool inject_target = false;
};

// For each grid size m and each seed: draw a random target of the promised
// size/depth, generate m samples, fit, and evaluate exhaustively at beta.
std::vector<ExperimentRow> generalization_experiment(const ExperimentConfig& config);

// CSV with header "m,seed,train_err,test_err,success,predicted_m".
void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

// JSON config file covering ExperimentConfig (see README for the schema).
ExperimentConfig load_experiment_config(const std::string& path);

} // namespace qpdim
