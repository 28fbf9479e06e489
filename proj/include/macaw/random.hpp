// SPDX-License-Identifier: Apache-2.0
//
// macaw: anisotropic-wavefront channel simulation and estimation
// Copyright (C) 2026 The macaw contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MACAW_RANDOM_HPP
#define MACAW_RANDOM_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace macaw
{
    // SplitMix64 finalizer; used to derive independent stream seeds
    constexpr std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Seed for sub-stream `stream` of a run seeded with `seed` (e.g. one per trial)
    constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
    {
        return splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
    }

    // Random source with platform-independent output.
    // std::mt19937_64 is fully specified; the distribution transforms are done here
    // because the std:: distributions are implementation-defined.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        std::uint64_t next() { return engine_(); }

        // Uniform on [0, 1) with 53 random bits
        double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        // Uniform integer on [0, n)
        std::uint64_t index(std::uint64_t n)
        {
            const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
            std::uint64_t x = engine_();
            while (x >= limit)
                x = engine_();
            return x % n;
        }

        // Standard normal (Box-Muller, pairs cached)
        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            double u1 = uniform();
            while (u1 <= 0.0)
                u1 = uniform();
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double a = 2.0 * 3.14159265358979323846 * u2;
            spare_ = r * std::sin(a);
            has_spare_ = true;
            return r * std::cos(a);
        }

        // Circularly-symmetric complex Gaussian with E|z|^2 = variance
        std::complex<double> complex_normal(double variance)
        {
            const double s = std::sqrt(0.5 * variance);
            const double re = normal();
            const double im = normal();
            return {s * re, s * im};
        }

        // Unit-modulus complex number with uniform phase
        std::complex<double> unit_phasor()
        {
            return std::polar(1.0, 2.0 * 3.14159265358979323846 * uniform());
        }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}

#endif
