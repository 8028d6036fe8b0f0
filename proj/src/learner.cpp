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

#include "qpdim/learner.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace qpdim {

void LearningConfig::validate() const {
    if (n < 2) throw std::invalid_argument("LearningConfig: need n >= 2");
    if (d < 2) throw std::invalid_argument("LearningConfig: need d >= 2");
    if (size < 1 || depth < 1) throw std::invalid_argument("LearningConfig: need size, depth >= 1");
    if (depth > size) throw std::invalid_argument("LearningConfig: need depth <= size");
    if (size > depth * (n / 2)) {
        throw std::invalid_argument("LearningConfig: size exceeds depth * floor(n/2)");
    }
    if (!(alpha > 0.0 && alpha < beta && beta < 1.0)) {
        throw std::invalid_argument("LearningConfig: need 0 < alpha < beta < 1");
    }
    if (epsilon <= 0.0 || epsilon >= 1.0) {
        throw std::invalid_argument("LearningConfig: need epsilon in (0,1)");
    }
    if (confidence <= 0.0 || confidence >= 1.0) {
        throw std::invalid_argument("LearningConfig: need confidence in (0,1)");
    }
    if (restarts < 1 || iterations < 1) {
        throw std::invalid_argument("LearningConfig: need positive optimizer budget");
    }
}

std::vector<TrainingExample> generate_dataset(const Circuit& target,
                                              InputDistribution distribution, int m,
                                              std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("generate_dataset: need m >= 1");
    require_valid_architecture(target.architecture());
    const int n = target.architecture().n;
    const int d = target.architecture().d;
    const std::int64_t dim = dim_pow(d, n);
    Rng rng(seed);
    std::vector<TrainingExample> data;
    data.reserve(m);
    for (int i = 0; i < m; ++i) {
        ProductVector x = distribution == InputDistribution::BasisUniform
                              ? ProductVector::basis(n, d, static_cast<std::int64_t>(rng.index(dim)))
                              : ProductVector::random_haar(n, d, rng);
        ProductVector y = distribution == InputDistribution::BasisUniform
                              ? ProductVector::basis(n, d, static_cast<std::int64_t>(rng.index(dim)))
                              : ProductVector::random_haar(n, d, rng);
        const double p = circuit_output_probability(target, x, y);
        data.push_back(TrainingExample{std::move(x), std::move(y), p});
    }
    return data;
}

CMatrix unitary_from_params(std::span<const double> params, int gate_dim) {
    const int expected = gate_dim * gate_dim;
    if (static_cast<int>(params.size()) != expected) {
        throw std::invalid_argument("unitary_from_params: need gate_dim^2 real parameters");
    }
    CMatrix h = CMatrix::Zero(gate_dim, gate_dim);
    int next = 0;
    for (int k = 0; k < gate_dim; ++k) h(k, k) = params[next++];
    for (int r = 0; r < gate_dim; ++r) {
        for (int c = r + 1; c < gate_dim; ++c) {
            const Complex entry(params[next], params[next + 1]);
            next += 2;
            h(r, c) = entry;
            h(c, r) = std::conj(entry);
        }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    const Eigen::VectorXd evals = solver.eigenvalues();
    CVector phases(gate_dim);
    for (int k = 0; k < gate_dim; ++k) phases[k] = std::polar(1.0, evals[k]);
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

std::vector<CMatrix> kraus_from_params(std::span<const double> params, int gate_dim, int count) {
    if (count < 1) throw std::invalid_argument("kraus_from_params: need count >= 1");
    const int rows = count * gate_dim;
    if (static_cast<int>(params.size()) != 2 * rows * gate_dim) {
        throw std::invalid_argument("kraus_from_params: need 2*count*gate_dim^2 real parameters");
    }
    CMatrix stacked(rows, gate_dim);
    int next = 0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < gate_dim; ++c) {
            stacked(r, c) = Complex(params[next], params[next + 1]);
            next += 2;
        }
    }
    // Polar retraction V = M (M^dagger M)^{-1/2} onto the Stiefel manifold.
    CMatrix gram = stacked.adjoint() * stacked;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram);
    const Eigen::VectorXd evals = solver.eigenvalues();
    CVector inv_roots(gate_dim);
    for (int k = 0; k < gate_dim; ++k) {
        if (evals[k] <= 1e-12) {
            throw std::invalid_argument("kraus_from_params: rank-deficient parameter matrix");
        }
        inv_roots[k] = 1.0 / std::sqrt(evals[k]);
    }
    const CMatrix isometry =
        stacked * (solver.eigenvectors() * inv_roots.asDiagonal() * solver.eigenvectors().adjoint());
    std::vector<CMatrix> kraus;
    kraus.reserve(count);
    for (int k = 0; k < count; ++k) {
        kraus.push_back(isometry.block(k * gate_dim, 0, gate_dim, gate_dim));
    }
    return kraus;
}

namespace {

// |<x|U|y>|^2 over all basis pairs, columns indexed by the input y.
Eigen::MatrixXd probability_table(const CircuitArchitecture& arch,
                                  const std::vector<CMatrix>& gates) {
    const std::int64_t dim = dim_pow(arch.d, arch.n);
    Eigen::MatrixXd table(dim, dim);
    CVector psi(dim);
    for (std::int64_t y = 0; y < dim; ++y) {
        psi.setZero();
        psi[y] = 1.0;
        for (int layer = 1; layer <= arch.depth; ++layer) {
            for (int g : arch.layer_gates(layer)) {
                apply_two_qudit_gate(psi, gates[g], arch.placements[g].a, arch.placements[g].b,
                                     arch.n, arch.d);
            }
        }
        table.col(y) = psi.cwiseAbs2();
    }
    return table;
}

struct BasisSample {
    std::int64_t x = 0;
    std::int64_t y = 0;
    double p = 0.0;
    double weight = 1.0;
};

// Collapses basis-distribution data to unique (x, y) cells.
std::vector<BasisSample> dedupe_basis(std::span<const TrainingExample> data, std::int64_t dim) {
    std::vector<BasisSample> samples;
    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> seen;
    for (const TrainingExample& ex : data) {
        const std::int64_t xi = ex.x.basis_index();
        const std::int64_t yi = ex.y.basis_index();
        if (xi < 0 || yi < 0 || xi >= dim || yi >= dim) {
            throw std::invalid_argument("erm_fit: non-basis example in basis mode");
        }
        auto [it, inserted] = seen.emplace(std::make_pair(xi, yi), samples.size());
        if (inserted) {
            samples.push_back(BasisSample{xi, yi, ex.p, 1.0});
        } else {
            samples[it->second].weight += 1.0;
        }
    }
    return samples;
}

class ErmObjective {
  public:
    ErmObjective(const CircuitArchitecture& arch, std::span<const TrainingExample> data)
        : arch_(arch), data_(data), dim_(dim_pow(arch.d, arch.n)) {
        basis_only_ = true;
        for (const TrainingExample& ex : data_) {
            if (ex.x.basis_index() < 0 || ex.y.basis_index() < 0) {
                basis_only_ = false;
                break;
            }
        }
        if (basis_only_) samples_ = dedupe_basis(data_, dim_);
    }

    int param_count() const {
        const int gate_dim = arch_.d * arch_.d;
        return arch_.size() * gate_dim * gate_dim;
    }

    std::vector<CMatrix> gates(std::span<const double> params) const {
        const int gate_dim = arch_.d * arch_.d;
        const int per_gate = gate_dim * gate_dim;
        std::vector<CMatrix> out;
        out.reserve(arch_.size());
        for (int g = 0; g < arch_.size(); ++g) {
            out.push_back(unitary_from_params(params.subspan(g * per_gate, per_gate), gate_dim));
        }
        return out;
    }

    // max deviation and mean-squared deviation in one pass.
    std::pair<double, double> losses(std::span<const double> params) const {
        const std::vector<CMatrix> gates_now = gates(params);
        double max_dev = 0.0;
        double sq_sum = 0.0;
        double weight_sum = 0.0;
        if (basis_only_) {
            const Eigen::MatrixXd table = probability_table(arch_, gates_now);
            for (const BasisSample& s : samples_) {
                const double dev = std::abs(table(s.x, s.y) - s.p);
                max_dev = std::max(max_dev, dev);
                sq_sum += s.weight * dev * dev;
                weight_sum += s.weight;
            }
        } else {
            const Circuit circuit(arch_, gates_now);
            for (const TrainingExample& ex : data_) {
                const double dev = std::abs(circuit_output_probability(circuit, ex.x, ex.y) - ex.p);
                max_dev = std::max(max_dev, dev);
                sq_sum += dev * dev;
                weight_sum += 1.0;
            }
        }
        return {max_dev, sq_sum / std::max(weight_sum, 1.0)};
    }

  private:
    CircuitArchitecture arch_;
    std::span<const TrainingExample> data_;
    std::int64_t dim_;
    bool basis_only_ = false;
    std::vector<BasisSample> samples_;
};

struct AdamState {
    std::vector<double> m, v;
    double beta1 = 0.9, beta2 = 0.999, lr = 0.05;
    int t = 0;

    explicit AdamState(std::size_t size) : m(size, 0.0), v(size, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad) {
        ++t;
        const double correction1 = 1.0 - std::pow(beta1, t);
        const double correction2 = 1.0 - std::pow(beta2, t);
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            const double mhat = m[i] / correction1;
            const double vhat = v[i] / correction2;
            params[i] -= lr * mhat / (std::sqrt(vhat) + 1e-8);
        }
    }
};

constexpr double kFiniteDiffStep = 1e-4;

} // namespace

FitResult erm_fit(std::span<const TrainingExample> data, const LearningConfig& config) {
    config.validate();
    if (data.empty()) throw std::invalid_argument("erm_fit: empty training data");

    std::vector<CircuitArchitecture> architectures;
    if (config.search_smaller) {
        for (int depth = 1; depth <= config.depth; ++depth) {
            for (int size = depth; size <= std::min(config.size, depth * (config.n / 2)); ++size) {
                auto batch = enumerate_architectures(config.n, config.d, depth, size);
                architectures.insert(architectures.end(), batch.begin(), batch.end());
            }
        }
    } else {
        architectures = enumerate_architectures(config.n, config.d, config.depth, config.size);
    }
    if (architectures.empty()) {
        throw std::invalid_argument("erm_fit: no admissible architecture (covering constraint)");
    }

    struct Best {
        double max_dev = std::numeric_limits<double>::infinity();
        int arch = 0;
        std::vector<double> params;
    } best;

    int restarts_used = 0;
    for (int restart = 0; restart < config.restarts; ++restart) {
        ++restarts_used;
        const int arch_index = restart % static_cast<int>(architectures.size());
        const ErmObjective objective(architectures[arch_index], data);
        Rng rng = Rng(config.seed).child(0x5eed0000ULL + restart);

        std::vector<double> params(objective.param_count());
        for (double& p : params) p = rng.normal() * 1.2;

        AdamState adam(params.size());
        std::vector<double> grad(params.size(), 0.0);
        std::vector<double> probe = params;
        const int smooth_iterations = (2 * config.iterations) / 3;
        double max_dev = objective.losses(params).first;
        for (int iter = 0; iter < config.iterations; ++iter) {
            const bool smooth = iter < smooth_iterations;
            adam.lr = smooth ? 0.05 : 0.02;
            for (std::size_t i = 0; i < params.size(); ++i) {
                probe = params;
                probe[i] = params[i] + kFiniteDiffStep;
                const auto [max_hi, mse_hi] = objective.losses(probe);
                probe[i] = params[i] - kFiniteDiffStep;
                const auto [max_lo, mse_lo] = objective.losses(probe);
                grad[i] = ((smooth ? mse_hi : max_hi) - (smooth ? mse_lo : max_lo)) /
                          (2.0 * kFiniteDiffStep);
            }
            adam.step(params, grad);
            max_dev = objective.losses(params).first;
            if (max_dev <= 0.9 * config.alpha) break;
        }
        if (max_dev < best.max_dev) {
            best.max_dev = max_dev;
            best.arch = arch_index;
            best.params = params;
        }
        if (best.max_dev <= config.alpha) break;
    }

    const ErmObjective best_objective(architectures[best.arch], data);
    Circuit hypothesis(architectures[best.arch], best_objective.gates(best.params));
    // Replay the data against the returned circuit; success is judged on this
    // value, not on the optimizer's internal bookkeeping.
    double replayed = 0.0;
    for (const TrainingExample& ex : data) {
        replayed = std::max(replayed,
                            std::abs(circuit_output_probability(hypothesis, ex.x, ex.y) - ex.p));
    }
    TrainReport report;
    report.train_error = replayed;
    report.success = replayed <= config.alpha;
    report.restarts_used = restarts_used;
    report.architectures_searched = static_cast<int>(architectures.size());
    return FitResult{std::move(hypothesis), report};
}

EvalReport evaluate_hypothesis(const Circuit& hypothesis, const Circuit& target,
                               InputDistribution distribution, double beta, int n_test,
                               std::uint64_t seed, bool exhaustive) {
    const CircuitArchitecture& ha = hypothesis.architecture();
    const CircuitArchitecture& ta = target.architecture();
    if (ha.n != ta.n || ha.d != ta.d) {
        throw std::invalid_argument("evaluate_hypothesis: circuits act on different systems");
    }
    EvalReport report;
    if (distribution == InputDistribution::BasisUniform && exhaustive) {
        const std::int64_t dim = dim_pow(ta.d, ta.n);
        std::int64_t exceed = 0;
        for (std::int64_t x = 0; x < dim; ++x) {
            for (std::int64_t y = 0; y < dim; ++y) {
                const ProductVector xv = ProductVector::basis(ta.n, ta.d, x);
                const ProductVector yv = ProductVector::basis(ta.n, ta.d, y);
                const double dev = std::abs(circuit_output_probability(hypothesis, xv, yv) -
                                            circuit_output_probability(target, xv, yv));
                if (dev > beta) ++exceed;
            }
        }
        report.exhaustive = true;
        report.trials = dim * dim;
        report.error_rate = static_cast<double>(exceed) / static_cast<double>(report.trials);
        report.ci_low = report.ci_high = report.error_rate;
        return report;
    }
    if (n_test < 1) throw std::invalid_argument("evaluate_hypothesis: need n_test >= 1");
    Rng rng(seed);
    const std::int64_t dim = dim_pow(ta.d, ta.n);
    std::int64_t exceed = 0;
    for (int i = 0; i < n_test; ++i) {
        ProductVector x = distribution == InputDistribution::BasisUniform
                              ? ProductVector::basis(ta.n, ta.d, static_cast<std::int64_t>(rng.index(dim)))
                              : ProductVector::random_haar(ta.n, ta.d, rng);
        ProductVector y = distribution == InputDistribution::BasisUniform
                              ? ProductVector::basis(ta.n, ta.d, static_cast<std::int64_t>(rng.index(dim)))
                              : ProductVector::random_haar(ta.n, ta.d, rng);
        const double dev = std::abs(circuit_output_probability(hypothesis, x, y) -
                                    circuit_output_probability(target, x, y));
        if (dev > beta) ++exceed;
    }
    report.exhaustive = false;
    report.trials = n_test;
    const double phat = static_cast<double>(exceed) / static_cast<double>(n_test);
    report.error_rate = phat;
    // Wilson 95% interval.
    const double z = 1.959963984540054;
    const double denom = 1.0 + z * z / n_test;
    const double center = (phat + z * z / (2.0 * n_test)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n_test + z * z / (4.0 * n_test * n_test)) / denom;
    report.ci_low = std::max(0.0, center - half);
    report.ci_high = std::min(1.0, center + half);
    return report;
}

std::vector<ExperimentRow> generalization_experiment(const ExperimentConfig& config) {
    config.learn.validate();
    if (config.m_grid.empty()) throw std::invalid_argument("generalization_experiment: empty m grid");
    if (config.seeds_per_m < 1) {
        throw std::invalid_argument("generalization_experiment: need seeds_per_m >= 1");
    }
    const LearningConfig& base = config.learn;
    const SampleComplexity predicted = sample_complexity(
        base.depth, base.size, base.d, base.epsilon, base.confidence, base.alpha, base.beta);

    const std::vector<CircuitArchitecture> architectures =
        enumerate_architectures(base.n, base.d, base.depth, base.size);
    if (architectures.empty()) {
        throw std::invalid_argument("generalization_experiment: no admissible architecture");
    }

    std::vector<ExperimentRow> rows;
    for (std::size_t mi = 0; mi < config.m_grid.size(); ++mi) {
        const int m = config.m_grid[mi];
        if (m < 1) throw std::invalid_argument("generalization_experiment: grid sizes must be >= 1");
        for (int s = 0; s < config.seeds_per_m; ++s) {
            const std::uint64_t run_seed = Rng::mix(base.seed ^ Rng::mix((mi << 20) + s + 1));
            Rng target_rng = Rng(run_seed).child(11);
            const CircuitArchitecture& arch =
                architectures[target_rng.index(architectures.size())];
            const Circuit target = Circuit::random_unitary(arch, target_rng);

            const std::vector<TrainingExample> data =
                generate_dataset(target, base.distribution, m, Rng(run_seed).child(13).index(~0ULL));

            ExperimentRow row;
            row.m = m;
            row.seed = run_seed;
            row.predicted_m = static_cast<double>(predicted.m);
            if (config.inject_target) {
                row.train_err = 0.0;
                row.success = true;
                row.test_err = evaluate_hypothesis(target, target, base.distribution, base.beta, 500,
                                                   Rng(run_seed).child(17).index(~0ULL))
                                   .error_rate;
            } else {
                LearningConfig fit_config = base;
                fit_config.seed = Rng(run_seed).child(19).index(~0ULL);
                const FitResult fit = erm_fit(data, fit_config);
                row.train_err = fit.report.train_error;
                row.success = fit.report.success;
                row.test_err = evaluate_hypothesis(fit.hypothesis, target, base.distribution,
                                                   base.beta, 500,
                                                   Rng(run_seed).child(17).index(~0ULL))
                                   .error_rate;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

namespace {

std::string format_double17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

} // namespace

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << "m,seed,train_err,test_err,success,predicted_m\n";
    for (const ExperimentRow& row : rows) {
        out << row.m << ',' << row.seed << ',' << format_double17(row.train_err) << ','
            << format_double17(row.test_err) << ',' << (row.success ? 1 : 0) << ','
            << format_double17(row.predicted_m) << '\n';
    }
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig config;
    LearningConfig& learn = config.learn;
    learn.n = root.value("n", learn.n);
    learn.d = root.value("d", learn.d);
    learn.size = root.value("size", learn.size);
    learn.depth = root.value("depth", learn.depth);
    learn.alpha = root.value("alpha", learn.alpha);
    learn.beta = root.value("beta", learn.beta);
    learn.epsilon = root.value("epsilon", learn.epsilon);
    learn.confidence = root.value("confidence", learn.confidence);
    learn.restarts = root.value("restarts", learn.restarts);
    learn.iterations = root.value("iterations", learn.iterations);
    learn.seed = root.value("seed", learn.seed);
    learn.search_smaller = root.value("search_smaller", learn.search_smaller);
    const std::string distribution = root.value("distribution", std::string("basis_uniform"));
    if (distribution == "basis_uniform") {
        learn.distribution = InputDistribution::BasisUniform;
    } else if (distribution == "haar_product") {
        learn.distribution = InputDistribution::HaarProduct;
    } else {
        throw std::invalid_argument("config: unknown distribution \"" + distribution + '"');
    }
    if (root.contains("m_grid")) {
        config.m_grid = root.at("m_grid").get<std::vector<int>>();
    }
    config.seeds_per_m = root.value("seeds_per_m", config.seeds_per_m);
    config.inject_target = root.value("inject_target", config.inject_target);
    learn.validate();
    return config;
}

} // namespace qpdim
