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

#ifndef MACAW_SCENARIO_HPP
#define MACAW_SCENARIO_HPP

#include "macaw/channel_model.hpp"
#include "macaw/common.hpp"
#include "macaw/geometry_optics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace macaw
{
    struct ScenarioConfig
    {
        std::string label;
        Upa upa;
        OfdmConfig ofdm;
        Vec3d ue_pos = Vec3d(30.0, 0.0, 1.5);
        int n_scatterers = 6;            // K
        int n_symbols = 16;              // P
        int n_rf = 16;                   // N_RF
        double snr_db = 10.0;
        double r_min = 1.7;              // [m]
        std::uint64_t seed = 1;
        double scatterer_curvature = 4.0; // [1/m] along the curved principal direction
        double spacing_lo = 0.8;          // Path-length gap range as a multiple of c0/B
        double spacing_hi = 1.2;
        double max_incidence_deg = 80.0;
        // Deterministic layouts: one scatterer per entry, overriding random placement
        std::vector<Vec3d> fixed_scatterers;

        int n_observations() const { return n_symbols * n_rf; }
        double wavelength() const { return ofdm.wavelength(); }
        void validate() const;
    };

    ScenarioConfig table1_defaults();

    struct Scenario
    {
        ScenarioConfig config;
        std::vector<Path> paths;
        std::vector<Vec3d> scatterers;
        std::vector<double> path_lengths; // UE -> scatterer -> array center [m]
        std::vector<PathParams> params;   // Ground truth
        CMatrix channel;                  // N x M
    };

    // Random multipath scenario (or the fixed layout when config.fixed_scatterers is set)
    Scenario gen_scenario(const ScenarioConfig &config);

    // Single-scatterer parameter sweeps; which = 1 (BS distance), 2 (UE distance),
    // 3 (array size and carrier at constant aperture), 4 (scatterer curvature)
    std::vector<ScenarioConfig> experiment_configs(int which);

    // Default r_min = r_nf / 5 for an array and wavelength
    double default_r_min(const Upa &upa, double wavelength);
}

#endif
