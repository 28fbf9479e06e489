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

#include "macaw/swc_similarity.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

using namespace macaw;
using namespace macaw::test;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    // F(l) = int_0^1 exp(j l x^2) dx
    cdouble fresnel(double l)
    {
        using boost::math::quadrature::gauss_kronrod;
        const double re = gauss_kronrod<double, 61>::integrate([&](double x) { return std::cos(l * x * x); }, 0.0, 1.0, 15, 1e-13);
        const double im = gauss_kronrod<double, 61>::integrate([&](double x) { return std::sin(l * x * x); }, 0.0, 1.0, 15, 1e-13);
        return {re, im};
    }

    // Best spherical match over the square aperture: max_S |F(l1 - S) F(l2 - S)|
    double square_best(double l1, double l2)
    {
        auto neg = [&](double s) { return -std::abs(fresnel(l1 - s) * fresnel(l2 - s)); };
        double best_s = 0.0, best = 0.0;
        const double lo = std::min(l1, l2) - 2.0, hi = std::max(l1, l2) + 2.0;
        for (int i = 0; i <= 200; ++i)
        {
            const double s = lo + (hi - lo) * i / 200.0;
            if (neg(s) < best)
                best = neg(s), best_s = s;
        }
        const double h = (hi - lo) / 200.0;
        return -boost::math::tools::brent_find_minima(neg, best_s - h, best_s + h, 40).second;
    }
}

TEST_CASE("similarity bound values", "[swc]")
{
    CHECK(similarity_bound(0.0) == 1.0);
    CHECK_THAT(similarity_bound(0.59), WithinAbs(0.90, 0.005));
    CHECK(similarity_bound(200.0) < 0.1);
    CHECK_THROWS_AS(similarity_bound(-1.0), Error);

    double prev = 1.0;
    for (int i = 1; i <= 1000; ++i)
    {
        const double b = similarity_bound(0.01 * i);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("bound agrees with the disk integral", "[swc]")
{
    CHECK_THAT(disk_integral_oracle(0.0, 0.0), WithinAbs(1.0, 1e-12));
    for (double mu : {0.3, 0.59, 1.0, 2.5, 5.0, 7.3, 10.0})
        CHECK_THAT(disk_integral_oracle(2.0 * mu, 0.0), WithinAbs(similarity_bound(mu), 1e-6));
    CHECK_THAT(similarity_bound(10.0), WithinAbs(disk_integral_oracle(20.0, 0.0), 0.02));
}

TEST_CASE("square aperture is never much worse than the bound", "[swc]")
{
    // The corner correction makes the bound approximate, but it must not overstate
    // the best spherical match on a square aperture
    for (int i = 0; i <= 20; ++i)
    {
        const double mu = 0.5 * i;
        const double sq = square_best(2.0 * mu, 0.0);
        INFO("mu = " << mu << ", square = " << sq << ", bound = " << similarity_bound(mu));
        CHECK(sq >= similarity_bound(mu) - 0.05);
        CHECK(sq <= 1.0 + 1e-12);
    }
    CHECK_THAT(square_best(0.0, 0.0), WithinAbs(1.0, 1e-12));
}

TEST_CASE("anisotropy parameter", "[swc]")
{
    const AnisotropyReport iso = mu_star(Mat2d::Identity() * 0.3, Mat2d::Identity(), 128, 128, 0.01, 0.02);
    CHECK(iso.mu_star == 0.0);
    CHECK(iso.bound == 1.0);

    // Aligned axes: mu = pi d^2 / (2 lambda) |q1 - q2| (N/2)^2
    Mat2d q = Vec2d(0.2, 0.05).asDiagonal();
    const AnisotropyReport r = mu_star(q, Mat2d::Identity(), 64, 64, 0.005, 0.01);
    CHECK_THAT(r.mu_star, WithinRel(kPi * 0.005 * 0.005 / 0.02 * 0.15 * 32 * 32, 1e-12));
    CHECK_THAT(r.q1, WithinRel(0.2, 1e-14));
    CHECK_THAT(r.q2, WithinRel(0.05, 1e-14));

    // Oblique projection onto a rectangular array picks the smaller diagonal entry of M
    Mat2d p;
    p << 0.8, 0.0, 0.0, 1.0;
    const AnisotropyReport s = mu_star(q, p, 64, 32, 0.005, 0.01);
    const double expect = kPi * 0.005 * 0.005 / 0.02 * 0.15 * std::min(std::pow(0.8 * 32, 2), 16.0 * 16.0);
    CHECK_THAT(s.mu_star, WithinRel(expect, 1e-12));

    CHECK_THROWS_AS(mu_star(q, Mat2d::Zero(), 8, 8, 0.005, 0.01), Error);
}

TEST_CASE("rayleigh distance for the reflected cylinder wave", "[swc]")
{
    RayleighCase plane;
    const RayleighResult a = rayleigh_distance(plane);
    CHECK_THAT(a.distance, WithinRel(108.7, 0.01));
    CHECK_THAT(a.mu_at_distance, WithinAbs(0.59, 1e-9));
    CHECK_THAT(a.q1, WithinRel(4.0 * std::sqrt(2.0), 1e-12));

    RayleighCase sphere;
    sphere.incident_curvature = 1.0 / 15.0;
    CHECK_THAT(rayleigh_distance(sphere).distance, WithinRel(33.0, 0.01));

    RayleighCase iso;
    iso.incident_curvature = 0.1;
    iso.surface_curvature = 0.0;
    CHECK(rayleigh_distance(iso).distance == 0.0);

    RayleighCase hopeless = plane;
    hopeless.s_max = 10.0;
    CHECK_THROWS_AS(rayleigh_distance(hopeless), Error);
}

TEST_CASE("best spherical fit of a spherical wave", "[swc]")
{
    Upa upa;
    upa.n_y = upa.n_z = 64;
    upa.d_ant = 0.005;
    const double lambda = 0.01;
    const Vec3d k = Vec3d(-0.9, 0.25, -0.3).normalized(); // Travelling into the array (normal is +x)
    const SwcFit fit = best_swc_fit(swc_steering(k, 2.0, upa, lambda), upa, lambda);
    CHECK(fit.cos_sim > 0.999);
    CHECK_THAT(fit.r_los, WithinRel(2.0, 0.05));
    CHECK(fit.k_los.dot(k) > 0.9999);

    const PathParams iso = swc_index_params(Vec2d(0.1, -0.2), 0.4, upa.d_ant, lambda);
    CHECK(best_swc_fit(awc_steering(iso.k_bar, iso.q_bar, 64, 64), upa, lambda).cos_sim > 0.99);

    CHECK_THROWS_AS(best_swc_fit(CMatrix::Zero(64, 64), upa, lambda), Error);
    CHECK_THROWS_AS(best_swc_fit(CMatrix::Ones(8, 8), upa, lambda), Error);
}

TEST_CASE("small bound experiment stays above the bound", "[swc]")
{
    BoundExperimentConfig cfg;
    cfg.n_bins = 5;
    cfg.per_bin = 2;
    cfg.sizes = {64};
    const auto rows = bound_experiment(cfg, 17, 1);
    REQUIRE(rows.size() == 10);
    for (const BoundSample &s : rows)
    {
        INFO("bin " << s.bin << " mu " << s.mu_star);
        CHECK(s.mu_star >= s.bin * 2.0 - 1e-9);
        CHECK(s.mu_star <= (s.bin + 1) * 2.0 + 1e-9);
        CHECK(s.cos_sim >= s.bound - 0.03);
        CHECK(s.bound == similarity_bound(s.mu_star));
    }
    // Bins share their random numbers, so the same index lands at the same array size
    CHECK(bound_sample(cfg, 3, 1, 17).cos_sim == rows[7].cos_sim);
}
