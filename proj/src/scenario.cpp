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

#include "macaw/scenario.hpp"

#include "macaw/random.hpp"

#include <cmath>
#include <sstream>

namespace macaw
{
    void ScenarioConfig::validate() const
    {
        upa.validate();
        ofdm.validate();
        if (n_scatterers < 1 && fixed_scatterers.empty())
            throw Error(Errc::invalid_argument, "scenario needs at least one scatterer");
        if (n_symbols < 1 || n_rf < 1)
            throw Error(Errc::invalid_argument, "scenario needs positive P and N_RF");
        if (n_observations() > upa.n_elements())
            throw Error(Errc::too_many_rows, "P * N_RF exceeds the number of antennas");
        if (!(r_min > 0.0))
            throw Error(Errc::invalid_argument, "r_min must be positive");
        if (scatterer_curvature < 0.0)
            throw Error(Errc::invalid_argument, "scatterer curvature must be non-negative");
        if (!(spacing_lo > 0.0) || spacing_hi < spacing_lo)
            throw Error(Errc::invalid_argument, "invalid path spacing range");
    }

    double default_r_min(const Upa &upa, double wavelength)
    {
        return upa.near_field_radius(wavelength) / 5.0;
    }

    ScenarioConfig table1_defaults()
    {
        ScenarioConfig c;
        c.label = "table1";
        c.upa = make_downtilted_upa<double>(128, 128, 0.01, Vec3d(0.0, 0.0, 10.0), kPi / 18.0);
        c.ofdm = OfdmConfig{15e9, 100e6, 128};
        c.ue_pos = Vec3d(30.0, 0.0, 1.5);
        c.n_scatterers = 6;
        c.n_symbols = 16;
        c.n_rf = 16;
        c.snr_db = 10.0;
        c.r_min = 1.7;
        c.scatterer_curvature = 4.0;
        return c;
    }

    namespace
    {
        std::string num(double v)
        {
            std::ostringstream os;
            os << v;
            return os.str();
        }

        // Cylinder patch at p whose normal bisects the directions towards the UE and the array
        Surface make_reflector(const Vec3d &p, const Vec3d &ue, const Vec3d &bs, double kappa, Rng &rng)
        {
            Surface s;
            s.point = p;
            s.normal = ((ue - p).normalized() + (bs - p).normalized()).normalized();
            auto [t1, t2] = make_tangent_basis<double>(s.normal);
            const double a = kTwoPi * rng.uniform();
            s.u1 = std::cos(a) * t1 + std::sin(a) * t2;
            s.u2 = s.normal.cross(s.u1);
            s.kappa1 = kappa;
            s.kappa2 = 0.0;
            return s;
        }

        bool admissible(const Vec3d &p, const ScenarioConfig &c)
        {
            const Vec3d &bs = c.upa.center;
            const Vec3d rel = p - bs;
            if (!(rel.norm() > c.r_min))
                return false;
            if (!(rel.dot(c.upa.normal()) > 0.0))
                return false;
            const Vec3d axis = c.ue_pos - bs;
            const double t = rel.dot(axis) / axis.squaredNorm();
            if (!(t > 0.0 && t < 1.0))
                return false;
            // Half the angle between the two rays is the incidence angle on the bisector normal
            const double cos_full = (c.ue_pos - p).normalized().dot((bs - p).normalized());
            const double incidence = 0.5 * std::acos(std::clamp(cos_full, -1.0, 1.0));
            return incidence < c.max_incidence_deg * kPi / 180.0;
        }

        // Uniform point on the prolate spheroid with foci a, b and distance sum L
        Vec3d sample_spheroid(const Vec3d &f1, const Vec3d &f2, double sum, Rng &rng)
        {
            const Vec3d axis = f2 - f1;
            const double c = 0.5 * axis.norm();
            const double a = 0.5 * sum;
            const double b = std::sqrt(a * a - c * c);
            const Vec3d e1 = axis.normalized();
            auto [e2, e3] = make_tangent_basis<double>(e1);
            const Vec3d center = 0.5 * (f1 + f2);
            while (true)
            {
                const double u = rng.uniform(-1.0, 1.0);
                const double phi = kTwoPi * rng.uniform();
                // Area element of the (u, phi) parameterisation is proportional to this ratio
                const double accept = std::sqrt(b * b * u * u + a * a * (1.0 - u * u)) / a;
                if (rng.uniform() >= accept)
                    continue;
                const double r = b * std::sqrt(std::max(0.0, 1.0 - u * u));
                return center + a * u * e1 + r * (std::cos(phi) * e2 + std::sin(phi) * e3);
            }
        }

        void add_path(Scenario &sc, const Vec3d &p, Rng &rng)
        {
            const ScenarioConfig &c = sc.config;
            Path path;
            path.ue_pos = c.ue_pos;
            path.bounces.push_back(make_reflector(p, c.ue_pos, c.upa.center, c.scatterer_curvature, rng));
            path.reflection_loss = rng.uniform(0.2, 0.8);
            path.reflection_phase = kTwoPi * rng.uniform();

            TraceOptions opt;
            opt.max_incidence = c.max_incidence_deg * kPi / 180.0;
            const Wavefront w = trace_path(path, c.upa, opt);
            PathParams pp = effective_params(w, c.upa, c.wavelength());
            pp.alpha = std::polar(std::sqrt(1.0 - path.reflection_loss) * w.amplitude(), path.reflection_phase);

            sc.paths.push_back(path);
            sc.scatterers.push_back(p);
            sc.path_lengths.push_back(w.eikonal);
            sc.params.push_back(pp);
        }
    }

    Scenario gen_scenario(const ScenarioConfig &config)
    {
        config.validate();
        Scenario sc;
        sc.config = config;
        Rng rng(derive_seed(config.seed, 0x5CE7A210ULL));

        if (!config.fixed_scatterers.empty())
        {
            for (const Vec3d &p : config.fixed_scatterers)
                add_path(sc, p, rng);
        }
        else
        {
            const double resolution = kSpeedOfLight / config.ofdm.bandwidth;
            double d = (config.ue_pos - config.upa.center).norm();
            for (int k = 0; k < config.n_scatterers; ++k)
            {
                d += rng.uniform(config.spacing_lo, config.spacing_hi) * resolution;
                bool placed = false;
                for (int attempt = 0; attempt < 100000; ++attempt)
                {
                    const Vec3d p = sample_spheroid(config.upa.center, config.ue_pos, d, rng);
                    if (admissible(p, config))
                    {
                        add_path(sc, p, rng);
                        placed = true;
                        break;
                    }
                }
                if (!placed)
                    throw Error(Errc::sampling_exhausted, "no admissible scatterer on the ellipsoid after 1e5 draws");
            }
        }
        sc.channel = synth_channel(sc.params, config.ofdm, config.upa);
        return sc;
    }

    std::vector<ScenarioConfig> experiment_configs(int which)
    {
        const ScenarioConfig base = table1_defaults();
        const Vec3d bs = base.upa.center;
        const Vec3d dir = (Vec3d(8.0, 4.0, 6.0) - bs).normalized();
        const Vec3d ue_offset = Vec3d(22.0, -4.0, -4.5); // Scatterer -> UE in the reference layout
        const double ref_bs_dist = 10.0;

        auto make = [&](const std::string &label, double bs_dist, double ue_dist) {
            ScenarioConfig c = base;
            c.label = label;
            c.n_scatterers = 1;
            const Vec3d s = bs + bs_dist * dir;
            c.ue_pos = s + ue_dist * ue_offset.normalized();
            c.fixed_scatterers = {s};
            return c;
        };

        std::vector<ScenarioConfig> out;
        switch (which)
        {
        case 1:
            for (double dist : {5.0, 10.0, 20.0})
                out.push_back(make("exp1 bs_distance=" + num(dist) + "m", dist, ue_offset.norm()));
            break;
        case 2:
            for (double dist : {2.0, 22.8, 50.0})
                out.push_back(make("exp2 ue_distance=" + num(dist) + "m", ref_bs_dist, dist));
            break;
        case 3:
            for (auto [n, f] : {std::pair{64, 7.5e9}, std::pair{128, 15e9}, std::pair{256, 30e9}})
            {
                ScenarioConfig c = make("exp3 array=" + num(n) + "x" + num(n) + " f=" + num(f / 1e9) + "GHz",
                                        ref_bs_dist, ue_offset.norm());
                c.upa.n_y = c.upa.n_z = n;
                c.upa.d_ant = 1.27 / double(n - 1);
                c.ofdm.carrier_f = f;
                c.r_min = default_r_min(c.upa, c.wavelength());
                out.push_back(c);
            }
            break;
        case 4:
            for (double kappa : {0.0, 0.5, 4.0})
            {
                ScenarioConfig c = make("exp4 curvature=" + num(kappa) + "/m", ref_bs_dist, ue_offset.norm());
                c.scatterer_curvature = kappa;
                out.push_back(c);
            }
            break;
        default:
            throw Error(Errc::invalid_argument, "experiment index must be 1..4");
        }
        return out;
    }
}
