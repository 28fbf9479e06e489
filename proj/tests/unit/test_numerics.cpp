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

#include "catch_amalgamated.hpp"
#include "test_support.hpp"

#include "macaw/fft.hpp"
#include "macaw/kadane.hpp"
#include "macaw/optim.hpp"

#include <vector>

using namespace macaw;
using Catch::Matchers::WithinAbs;

namespace
{
    // O(n^2) scan of every run, keeping the earliest shortest maximum
    Subarray brute_max_run(const std::vector<double> &x, bool circular)
    {
        Subarray best{0, 1, x[0]};
        const std::size_t n = x.size();
        for (std::size_t b = 0; b < n; ++b)
        {
            double s = 0.0;
            const std::size_t max_len = circular ? n : n - b;
            for (std::size_t len = 1; len <= max_len; ++len)
            {
                s += x[(b + len - 1) % n];
                if (s > best.sum + 1e-12)
                    best = {b, len, s};
            }
        }
        return best;
    }

    std::vector<cdouble> naive_dft(const std::vector<cdouble> &x, double sign)
    {
        const std::size_t n = x.size();
        std::vector<cdouble> out(n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                out[k] += x[i] * std::polar(1.0, sign * kTwoPi * double(k * i % n) / double(n));
        return out;
    }
}

TEST_CASE("kadane matches exhaustive search", "[numerics]")
{
    Rng rng(11);
    for (int t = 0; t < 500; ++t)
    {
        std::vector<double> x(1 + rng.index(24));
        for (double &v : x)
            v = rng.uniform(-1.0, 0.6);
        const Subarray fast = max_subarray(x), slow = brute_max_run(x, false);
        CHECK_THAT(fast.sum, WithinAbs(slow.sum, 1e-12));
        const Subarray cfast = max_circular_subarray(x), cslow = brute_max_run(x, true);
        CHECK_THAT(cfast.sum, WithinAbs(cslow.sum, 1e-12));

        // The reported run must actually add up to the reported sum
        double s = 0.0;
        for (std::size_t i = 0; i < cfast.length; ++i)
            s += x[(cfast.begin + i) % x.size()];
        CHECK_THAT(s, WithinAbs(cfast.sum, 1e-12));
    }
}

TEST_CASE("kadane edge cases", "[numerics]")
{
    CHECK(max_subarray(std::vector<double>{}).length == 0);

    const std::vector<double> neg{-3.0, -1.0, -2.0};
    const Subarray s = max_subarray(neg);
    CHECK(s.begin == 1);
    CHECK(s.length == 1);

    // Energy split across the wrap point of a DFT grid
    const std::vector<double> wrap{2.0, 1.0, -5.0, -5.0, -5.0, 3.0};
    const Subarray c = max_circular_subarray(wrap);
    CHECK(c.begin == 5);
    CHECK(c.length == 3);
    CHECK_THAT(c.sum, WithinAbs(6.0, 1e-15));
}

TEST_CASE("fft matches the direct DFT", "[numerics]")
{
    Rng rng(3);
    for (std::size_t n : {1u, 2u, 7u, 16u, 45u, 128u})
    {
        std::vector<cdouble> x(n), fwd(n), inv(n);
        for (auto &v : x)
            v = rng.complex_normal(1.0);
        fft::forward(x, fwd);
        fft::inverse(x, inv);
        const auto ref_fwd = naive_dft(x, -1.0), ref_inv = naive_dft(x, +1.0);
        for (std::size_t k = 0; k < n; ++k)
        {
            CHECK(std::abs(fwd[k] - ref_fwd[k]) < 1e-10 * std::sqrt(double(n)));
            CHECK(std::abs(inv[k] - ref_inv[k]) < 1e-10 * std::sqrt(double(n)));
        }
    }
}

TEST_CASE("padded fft2 and ifft2 round trip", "[numerics]")
{
    Rng rng(5);
    CMatrix x(5, 3);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x.data()[i] = rng.complex_normal(1.0);

    const CMatrix big = fft::fft2(x, 8, 4);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 4; ++c)
        {
            cdouble ref = 0.0;
            for (int a = 0; a < 5; ++a)
                for (int b = 0; b < 3; ++b)
                    ref += x(a, b) * std::polar(1.0, -kTwoPi * (r * a / 8.0 + c * b / 4.0));
            CHECK(std::abs(big(r, c) - ref) < 1e-12);
        }

    const CMatrix back = fft::ifft2(big);
    CHECK((back.topLeftCorner(5, 3) - x).norm() < 1e-12);
    CHECK(back.bottomRows(3).norm() < 1e-12);
}

TEST_CASE("spectral peak locates an off-grid tone", "[numerics]")
{
    const Vec2d f(0.1234, -0.3071);
    CMatrix x(32, 32);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            x(i, j) = std::polar(1.0, kTwoPi * (f(0) * i + f(1) * j));
    const auto p = fft::spectral_peak(x, 4);
    // Parabolic refinement on a 128-point grid is good to a fraction of a bin
    CHECK(std::abs(p.freq(0) - f(0)) < 0.25 / 128);
    CHECK(std::abs(p.freq(1) - f(1)) < 0.25 / 128);
}

TEST_CASE("power-of-two and wrap helpers", "[numerics]")
{
    CHECK(fft::next_pow2(1) == 1);
    CHECK(fft::next_pow2(5) == 8);
    CHECK(fft::next_pow2(512) == 512);
    CHECK(fft::wrap_half(0.5) == -0.5);
    CHECK_THAT(fft::wrap_half(1.25), WithinAbs(0.25, 1e-15));
    CHECK_THAT(fft::wrap_half(-0.75), WithinAbs(0.25, 1e-15));
}

TEST_CASE("nelder-mead minimises the rosenbrock valley", "[numerics]")
{
    auto f = [](const Eigen::VectorXd &v) { return 100.0 * std::pow(v(1) - v(0) * v(0), 2) + std::pow(1.0 - v(0), 2); };
    const auto r = nelder_mead(f, Eigen::Vector2d(-1.2, 1.0), Eigen::Vector2d(0.1, 0.1), 2000, 1e-16);
    CHECK_THAT(r.x(0), WithinAbs(1.0, 1e-4));
    CHECK_THAT(r.x(1), WithinAbs(1.0, 1e-4));
}

TEST_CASE("parabolic offset is exact on a parabola", "[numerics]")
{
    const double x0 = 0.3;
    auto g = [&](double x) { return 5.0 - 2.0 * (x - x0) * (x - x0); };
    CHECK_THAT(parabolic_offset(g(-1), g(0), g(1)), WithinAbs(x0, 1e-14));
    CHECK(parabolic_offset(1.0, 1.0, 1.0) == 0.0);
    CHECK(parabolic_offset(1.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("rng streams are deterministic and moments are right", "[numerics]")
{
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i)
        REQUIRE(a.next() == b.next());
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));

    Rng r(7);
    const int n = 200000;
    double m = 0.0, m2 = 0.0, c2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double v = r.normal();
        m += v;
        m2 += v * v;
        c2 += std::norm(r.complex_normal(2.0));
    }
    CHECK(std::abs(m / n) < 0.01);
    CHECK(std::abs(m2 / n - 1.0) < 0.02);
    CHECK(std::abs(c2 / n - 2.0) < 0.04);
}
