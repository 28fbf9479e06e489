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

#include "macaw/scenario.hpp"
#include "macaw/swc_similarity.hpp"

#include <algorithm>

using namespace macaw;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    // Same geometry rules on a tiny array, so thousands of draws stay cheap
    ScenarioConfig tiny(std::uint64_t seed)
    {
        ScenarioConfig c = table1_defaults();
        c.upa.n_y = c.upa.n_z = 4;
        c.ofdm.n_subcarriers = 1;
        c.n_symbols = 1;
        c.seed = seed;
        return c;
    }

    std::vector<double> gaps(const Scenario &sc)
    {
        std::vector<double> g;
        double prev = (sc.config.ue_pos - sc.config.upa.center).norm();
        for (double d : sc.path_lengths)
        {
            g.push_back(d - prev);
            prev = d;
        }
        return g;
    }
}

TEST_CASE("default scenario values", "[scenario]")
{
    const ScenarioConfig c = table1_defaults();
    CHECK(c.upa.n_y == 128);
    CHECK(c.upa.n_z == 128);
    CHECK(c.upa.d_ant == 0.01);
    CHECK(c.upa.center == Vec3d(0, 0, 10));
    CHECK_THAT(std::acos(c.upa.col_dir.z()), WithinAbs(10.0 * kPi / 180.0, 1e-12));
    CHECK(c.ofdm.carrier_f == 15e9);
    CHECK(c.ofdm.bandwidth == 100e6);
    CHECK(c.ofdm.n_subcarriers == 128);
    CHECK(c.ue_pos == Vec3d(30, 0, 1.5));
    CHECK(c.n_scatterers == 6);
    CHECK(c.n_symbols * c.n_rf == 256);
    CHECK(c.snr_db == 10.0);
    CHECK(c.r_min == 1.7);
    CHECK_THAT((c.ue_pos - c.upa.center).norm(), WithinAbs(31.18, 0.005));
    CHECK_THAT(kSpeedOfLight / c.ofdm.bandwidth, WithinAbs(3.0, 0.01));
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("generated scenario satisfies the placement rules", "[scenario]")
{
    const Scenario sc = gen_scenario(table1_defaults());
    const ScenarioConfig &c = sc.config;
    REQUIRE(sc.params.size() == 6);
    REQUIRE(sc.channel.rows() == 128 * 128);
    REQUIRE(sc.channel.cols() == 128);

    const double res = kSpeedOfLight / c.ofdm.bandwidth;
    for (double g : gaps(sc))
    {
        CHECK(g >= 2.4 - 0.01);
        CHECK(g <= 3.6 + 0.01);
        CHECK(g >= 0.8 * res - 1e-9);
        CHECK(g <= 1.2 * res + 1e-9);
    }

    const Vec3d bs = c.upa.center;
    const double q_max = c.upa.d_ant * c.upa.d_ant / (c.wavelength() * c.r_min);
    for (std::size_t k = 0; k < sc.scatterers.size(); ++k)
    {
        const Vec3d p = sc.scatterers[k];
        CHECK((p - bs).norm() > 1.7);
        CHECK_THAT((p - bs).norm() + (p - c.ue_pos).norm(), WithinRel(sc.path_lengths[k], 1e-9));
        CHECK((p - bs).dot(c.upa.normal()) > 0.0);
        const double t = (p - bs).dot(c.ue_pos - bs) / (c.ue_pos - bs).squaredNorm();
        CHECK(t > 0.0);
        CHECK(t < 1.0);

        Eigen::SelfAdjointEigenSolver<Mat2d> es(sc.params[k].q_bar);
        CHECK(es.eigenvalues().minCoeff() >= -1e-15);
        CHECK(es.eigenvalues().maxCoeff() <= q_max);
        CHECK_THAT(sc.params[k].s_bar, WithinRel(sc.path_lengths[k] / c.wavelength(), 1e-12));
        CHECK(std::abs(sc.params[k].alpha) > 0.0);
    }
    CHECK((sc.channel - synth_channel(sc.params, c.ofdm, c.upa)).norm() == 0.0);
}

TEST_CASE("scenario generation is deterministic", "[scenario]")
{
    const Scenario a = gen_scenario(tiny(5)), b = gen_scenario(tiny(5)), other = gen_scenario(tiny(6));
    REQUIRE(a.params.size() == b.params.size());
    for (std::size_t k = 0; k < a.params.size(); ++k)
    {
        CHECK(a.scatterers[k] == b.scatterers[k]);
        CHECK(a.params[k].q_bar == b.params[k].q_bar);
        CHECK(a.params[k].alpha == b.params[k].alpha);
    }
    CHECK(a.channel == b.channel);
    CHECK(a.scatterers[0] != other.scatterers[0]);
}

TEST_CASE("path gaps are uniform over the allowed range", "[scenario]")
{
    std::vector<double> u;
    for (std::uint64_t s = 0; s < 1000; ++s)
    {
        const Scenario sc = gen_scenario(tiny(1000 + s));
        const double res = kSpeedOfLight / sc.config.ofdm.bandwidth;
        for (double g : gaps(sc))
            u.push_back((g / res - 0.8) / 0.4);
    }
    std::sort(u.begin(), u.end());
    const double n = double(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        d = std::max({d, std::abs(u[i] - i / n), std::abs((i + 1) / n - u[i])});
    // Kolmogorov-Smirnov at the 1% level: sqrt(n) D < 1.628
    INFO("KS statistic " << d * std::sqrt(n));
    CHECK(d * std::sqrt(n) < 1.628);
}

TEST_CASE("scenario validation", "[scenario]")
{
    ScenarioConfig c = table1_defaults();
    c.n_scatterers = 0;
    CHECK_THROWS_AS(gen_scenario(c), Error);

    c = table1_defaults();
    c.n_rf = 128 * 128;
    try
    {
        c.validate();
        FAIL("oversized observation accepted");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == Errc::too_many_rows);
    }

    c = table1_defaults();
    c.r_min = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = table1_defaults();
    c.spacing_hi = 0.5;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("experiment layouts", "[scenario]")
{
    const Vec3d bs = table1_defaults().upa.center;
    const Vec3d dir = (Vec3d(8, 4, 6) - bs).normalized();

    const auto e1 = experiment_configs(1);
    REQUIRE(e1.size() == 3);
    const double dist[] = {5.0, 10.0, 20.0};
    for (int i = 0; i < 3; ++i)
    {
        REQUIRE(e1[i].fixed_scatterers.size() == 1);
        const Vec3d rel = e1[i].fixed_scatterers[0] - bs;
        CHECK_THAT(rel.norm(), WithinRel(dist[i], 1e-12));
        CHECK(rel.normalized().dot(dir) > 1.0 - 1e-12);
    }

    const auto e2 = experiment_configs(2);
    const double ue_dist[] = {2.0, 22.8, 50.0};
    for (int i = 0; i < 3; ++i)
        CHECK_THAT((e2[i].ue_pos - e2[i].fixed_scatterers[0]).norm(), WithinRel(ue_dist[i], 1e-12));

    const auto e3 = experiment_configs(3);
    for (const auto &c : e3)
    {
        CHECK_THAT(c.upa.d_ant * (c.upa.n_y - 1), WithinRel(1.27, 1e-12));
        CHECK_THAT(c.r_min, WithinRel(c.upa.near_field_radius(c.wavelength()) / 5.0, 1e-12));
    }
    CHECK(e3[0].ofdm.carrier_f == 7.5e9);
    CHECK(e3[2].upa.n_y == 256);

    const auto e4 = experiment_configs(4);
    CHECK(e4[0].scatterer_curvature == 0.0);
    CHECK(e4[2].scatterer_curvature == 4.0);
    CHECK_THROWS_AS(experiment_configs(5), Error);
}

TEST_CASE("flat experiment reflector gives a spherical wave", "[scenario]")
{
    ScenarioConfig c = experiment_configs(4)[0];
    c.ofdm.n_subcarriers = 2;
    const Scenario sc = gen_scenario(c);
    REQUIRE(sc.params.size() == 1);
    CHECK(sc.paths[0].bounces[0].kappa1 == 0.0);
    const PathParams &p = sc.params[0];
    const PathParams sph = swc_index_params(p.k_bar, 1.0 / sc.path_lengths[0], c.upa.d_ant, c.wavelength());
    CHECK((p.q_bar - sph.q_bar).norm() < 1e-12 * sph.q_bar.norm());
}
