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

#ifndef MACAW_HARNESS_SERIALIZE_HPP
#define MACAW_HARNESS_SERIALIZE_HPP

#include "macaw/estimator.hpp"
#include "macaw/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace macaw::harness
{
    // Keys keep insertion order, so dumps are stable
    using Json = nlohmann::ordered_json;

    // Parses JSON text; syntax errors become ValidationError naming `source`, line and column
    Json parse_json(const std::string &text, const std::string &source);
    Json read_json(const std::filesystem::path &path);
    void write_json(const std::filesystem::path &path, const Json &j);

    Json to_json(const Vec3d &v);
    Json to_json(const Mat2d &m);
    Json to_json(cdouble z);
    Json to_json(const Upa &upa);
    Json to_json(const OfdmConfig &ofdm);
    Json to_json(const PathParams &p);
    Json to_json(const Surface &s);
    Json to_json(const Path &p);
    Json to_json(const ScenarioConfig &c);
    Json to_json(const EstimatorConfig &c);
    Json to_json(const StageTimings &t);

    // Readers fill fields present in `j` on top of `base` and reject unknown keys
    Vec3d vec3_from_json(const Json &j);
    Mat2d mat2_from_json(const Json &j);
    cdouble complex_from_json(const Json &j);
    Upa upa_from_json(const Json &j, Upa base = {});
    OfdmConfig ofdm_from_json(const Json &j, OfdmConfig base = {});
    PathParams path_params_from_json(const Json &j);
    Surface surface_from_json(const Json &j);
    Path path_from_json(const Json &j);
    ScenarioConfig scenario_config_from_json(const Json &j, ScenarioConfig base = table1_defaults());
    EstimatorConfig estimator_config_from_json(const Json &j, EstimatorConfig base = {});

    // Scenario without the channel matrix; `channel_file` names its MACAWBIN dump when non-empty
    Json scenario_to_json(const Scenario &sc, const std::string &channel_file);
    Scenario scenario_from_json(const Json &j);
}

#endif
