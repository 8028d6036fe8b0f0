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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace qpdim {

// Deterministic random stream. Every randomized operation in the library
// consumes an explicit seed or an Rng; the mapping seed -> values is pinned by
// mt19937_64 plus the arithmetic below (no implementation-defined
// std::*_distribution state), so a fixed seed yields identical values on every
// run and platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_base_(seed) {}

    // Splitmix64 finalizer; used to derive independent child seeds.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    Rng child(std::uint64_t tag) const { return Rng(mix(seed_base_ ^ mix(tag))); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller. Stateless: two uniforms per call.
    double normal() {
        double u = 0.0;
        do {
            u = uniform();
        } while (u <= 0.0);
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    }

    std::complex<double> complex_normal() {
        double u = 0.0;
        do {
            u = uniform();
        } while (u <= 0.0);
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        return {r * std::cos(2.0 * M_PI * v), r * std::sin(2.0 * M_PI * v)};
    }

    // Uniform integer in [0, bound) by rejection.
    std::uint64_t index(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = 0;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_base_ = 0;
};

} // namespace qpdim
