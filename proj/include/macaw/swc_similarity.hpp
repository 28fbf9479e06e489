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

#ifndef MACAW_SWC_SIMILARITY_HPP
#define MACAW_SWC_SIMILARITY_HPP

#include "macaw/channel_model.hpp"
#include "macaw/common.hpp"
#include "macaw/geometry_optics.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace macaw
{
    struct AnisotropyReport
    {
        double mu_star = 0.0;
        double bound = 1.0;
        double q1 = 0.0; // Principal curvatures of Q_BS [1/m], q1 >= q2
        double q2 = 0.0;
        Mat2d m_matrix = Mat2d::Zero();
    };

    // Corner-compensation factor t(mu) = 1 + (4/pi - 1) exp(-mu^2)
    double similarity_scale(double mu);

    // Approximate lower bound of the best spherical-wave cosine similarity:
    // (pi/4) t(mu) sqrt(J0(mu)^2 + J1(mu)^2)
    double similarity_bound(double mu);

    // Anisotropy parameter of a wavefront with curvature q_bs (in its tangent basis) seen through
    // the tangent-to-array projection p_proj
    AnisotropyReport mu_star(const Mat2d &q_bs, const Mat2d &p_proj, int n_y, int n_z, double d_ant, double wavelength);

    // (pi/4) t(mu) |int_0^1 exp(jSu) J0(mu u) du| with S = (l1 + l2)/2, mu = |l1 - l2|/2
    double disk_integral_oracle(double lambda1, double lambda2);

    // Spherical-wave steering in index-domain form: k_bar and Q_bar = (d^2 rho / lambda)(I - k k^T)
    PathParams swc_index_params(const Vec2d &k_bar, double rho, double d_ant, double wavelength);

    struct SwcFitGrid
    {
        int n_rho = 64;       // Inverse-distance grid points on [0, rho_max]
        double rho_max = 0.0; // 0 selects 1 / r_min of the array
        int pad = 2;          // Zero-padding factor of the direction FFT
        int n_starts = 3;     // Local refinements started from the best grid cells
        int max_iter = 200;   // Nelder-Mead iterations per start and restart
        int restarts = 2;     // Restarts with a shrunken simplex around the incumbent
    };

    struct SwcFit
    {
        Vec3d k_los = Vec3d::UnitX(); // Direction of travel at the array
        double r_los = std::numeric_limits<double>::infinity();
        double cos_sim = 0.0;
        Vec2d k_bar = Vec2d::Zero();
        double rho = 0.0; // 1 / r_los
    };

    // Best-matching spherical wave for a steering matrix c (n_y x n_z)
    SwcFit best_swc_fit(const CMatrix &c, const Upa &upa, double wavelength, const SwcFitGrid &grid = {});

    // Randomised check of the bound: samples stratified in mu* bins
    struct BoundExperimentConfig
    {
        int n_bins = 20;
        int per_bin = 50;
        double mu_max = 10.0;
        std::vector<int> sizes{64, 96, 128};
        double wavelength = 0.01;
        double d_ant = 0.005;
        double max_incidence_deg = 60.0;
        SwcFitGrid grid;
    };

    struct BoundSample
    {
        int bin = 0;
        int index = 0; // Sample index within the bin
        int n = 0;     // Array side length
        double mu_star = 0.0;
        double cos_sim = 0.0;
        double bound = 0.0;
    };

    // One sample. The geometry depends only on (seed, index) so bins share random numbers.
    BoundSample bound_sample(const BoundExperimentConfig &cfg, int bin, int index, std::uint64_t seed);

    std::vector<BoundSample> bound_experiment(const BoundExperimentConfig &cfg, std::uint64_t seed, int jobs = 1);

    // Plane or spherical incident wave reflected by a cylinder, then propagated s to a broadside UPA
    struct RayleighCase
    {
        double incident_curvature = 0.0; // [1/m], 0 for a plane wave
        double surface_curvature = 2.0;  // Curved principal direction [1/m]
        double incidence_deg = 45.0;
        int n = 256;
        double d_ant = 0.005;
        double wavelength = 0.01;
        double target_mu = 0.59;
        double s_max = 1e6;
    };

    struct RayleighResult
    {
        double distance = 0.0; // Smallest s with mu*(s) <= target
        double mu_at_distance = 0.0;
        double bound_at_distance = 1.0;
        double q1 = 0.0, q2 = 0.0; // Principal curvatures right after reflection
    };

    RayleighResult rayleigh_distance(const RayleighCase &rc);
}

#endif
