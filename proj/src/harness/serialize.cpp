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

#include "macaw/harness/serialize.hpp"

#include "macaw/harness/binary_io.hpp"

#include <algorithm>
#include <initializer_list>
#include <string_view>

namespace macaw::harness
{
    namespace
    {
        void check_keys(const Json &j, std::initializer_list<std::string_view> allowed, const char *what)
        {
            if (!j.is_object())
                throw ValidationError(std::string(what) + ": expected an object");
            for (const auto &[key, value] : j.items())
                if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                    throw ValidationError(std::string(what) + ": unknown key '" + key + "'");
        }

        template <typename T>
        void read(const Json &j, const char *key, T &out)
        {
            if (!j.contains(key))
                return;
            try
            {
                out = j.at(key).get<T>();
            }
            catch (const nlohmann::json::exception &e)
            {
                throw ValidationError(std::string("key '") + key + "': " + e.what());
            }
        }

        std::pair<std::size_t, std::size_t> line_col(const std::string &text, std::size_t byte)
        {
            std::size_t line = 1, col = 1;
            for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
            {
                if (text[i] == '\n')
                    ++line, col = 1;
                else
                    ++col;
            }
            return {line, col};
        }
    }

    Json parse_json(const std::string &text, const std::string &source)
    {
        try
        {
            return Json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            const auto [line, col] = line_col(text, e.byte);
            throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON parse error: " + e.what());
        }
    }

    Json read_json(const std::filesystem::path &path)
    {
        return parse_json(read_file(path), path.string());
    }

    void write_json(const std::filesystem::path &path, const Json &j)
    {
        write_file(path, j.dump(2) + "\n");
    }

    Json to_json(const Vec3d &v) { return Json::array({v(0), v(1), v(2)}); }

    Json to_json(const Mat2d &m) { return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})}); }

    Json to_json(cdouble z) { return Json::array({z.real(), z.imag()}); }

    Vec3d vec3_from_json(const Json &j)
    {
        if (!j.is_array() || j.size() != 3)
            throw ValidationError("expected a 3-vector");
        return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    }

    Mat2d mat2_from_json(const Json &j)
    {
        if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() || j[1].size() != 2)
            throw ValidationError("expected a 2x2 matrix");
        Mat2d m;
        m << j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(), j[1][1].get<double>();
        return m;
    }

    cdouble complex_from_json(const Json &j)
    {
        if (j.is_number())
            return {j.get<double>(), 0.0};
        if (!j.is_array() || j.size() != 2)
            throw ValidationError("expected a complex number [re, im]");
        return {j[0].get<double>(), j[1].get<double>()};
    }

    Json to_json(const Upa &upa)
    {
        Json j;
        j["n_y"] = upa.n_y;
        j["n_z"] = upa.n_z;
        j["d_ant"] = upa.d_ant;
        j["center"] = to_json(upa.center);
        j["row_dir"] = to_json(upa.row_dir);
        j["col_dir"] = to_json(upa.col_dir);
        return j;
    }

    // "downtilt_deg" is accepted as shorthand for the axis pair of a downtilted array
    Upa upa_from_json(const Json &j, Upa base)
    {
        check_keys(j, {"n_y", "n_z", "d_ant", "center", "row_dir", "col_dir", "downtilt_deg"}, "upa");
        read(j, "n_y", base.n_y);
        read(j, "n_z", base.n_z);
        read(j, "d_ant", base.d_ant);
        if (j.contains("center"))
            base.center = vec3_from_json(j["center"]);
        if (j.contains("downtilt_deg"))
        {
            const Upa t = make_downtilted_upa<double>(base.n_y, base.n_z, base.d_ant, base.center, j["downtilt_deg"].get<double>() * kPi / 180.0);
            base.row_dir = t.row_dir;
            base.col_dir = t.col_dir;
        }
        if (j.contains("row_dir"))
            base.row_dir = vec3_from_json(j["row_dir"]);
        if (j.contains("col_dir"))
            base.col_dir = vec3_from_json(j["col_dir"]);
        return base;
    }

    Json to_json(const OfdmConfig &ofdm)
    {
        Json j;
        j["carrier_f"] = ofdm.carrier_f;
        j["bandwidth"] = ofdm.bandwidth;
        j["n_subcarriers"] = ofdm.n_subcarriers;
        return j;
    }

    OfdmConfig ofdm_from_json(const Json &j, OfdmConfig base)
    {
        check_keys(j, {"carrier_f", "bandwidth", "n_subcarriers"}, "ofdm");
        read(j, "carrier_f", base.carrier_f);
        read(j, "bandwidth", base.bandwidth);
        read(j, "n_subcarriers", base.n_subcarriers);
        return base;
    }

    Json to_json(const PathParams &p)
    {
        Json j;
        j["k_bar"] = Json::array({p.k_bar(0), p.k_bar(1)});
        j["q_bar"] = to_json(p.q_bar);
        j["s_bar"] = p.s_bar;
        j["alpha"] = to_json(p.alpha);
        return j;
    }

    PathParams path_params_from_json(const Json &j)
    {
        check_keys(j, {"k_bar", "q_bar", "s_bar", "alpha"}, "path parameters");
        PathParams p;
        if (j.contains("k_bar"))
        {
            const auto &k = j["k_bar"];
            if (!k.is_array() || k.size() != 2)
                throw ValidationError("k_bar: expected a 2-vector");
            p.k_bar = {k[0].get<double>(), k[1].get<double>()};
        }
        if (j.contains("q_bar"))
            p.q_bar = mat2_from_json(j["q_bar"]);
        read(j, "s_bar", p.s_bar);
        if (j.contains("alpha"))
            p.alpha = complex_from_json(j["alpha"]);
        return p;
    }

    Json to_json(const Surface &s)
    {
        Json j;
        j["point"] = to_json(s.point);
        j["normal"] = to_json(s.normal);
        j["u1"] = to_json(s.u1);
        j["u2"] = to_json(s.u2);
        j["kappa1"] = s.kappa1;
        j["kappa2"] = s.kappa2;
        return j;
    }

    Surface surface_from_json(const Json &j)
    {
        check_keys(j, {"point", "normal", "u1", "u2", "kappa1", "kappa2"}, "surface");
        Surface s;
        s.point = vec3_from_json(j.at("point"));
        s.normal = vec3_from_json(j.at("normal"));
        s.u1 = vec3_from_json(j.at("u1"));
        s.u2 = vec3_from_json(j.at("u2"));
        read(j, "kappa1", s.kappa1);
        read(j, "kappa2", s.kappa2);
        return s;
    }

    Json to_json(const Path &p)
    {
        Json j;
        j["ue_pos"] = to_json(p.ue_pos);
        j["bounces"] = Json::array();
        for (const auto &b : p.bounces)
            j["bounces"].push_back(to_json(b));
        j["reflection_loss"] = p.reflection_loss;
        j["reflection_phase"] = p.reflection_phase;
        j["los"] = p.los;
        return j;
    }

    Path path_from_json(const Json &j)
    {
        check_keys(j, {"ue_pos", "bounces", "reflection_loss", "reflection_phase", "los"}, "path");
        Path p;
        p.ue_pos = vec3_from_json(j.at("ue_pos"));
        if (j.contains("bounces"))
            for (const auto &b : j["bounces"])
                p.bounces.push_back(surface_from_json(b));
        read(j, "reflection_loss", p.reflection_loss);
        read(j, "reflection_phase", p.reflection_phase);
        read(j, "los", p.los);
        return p;
    }

    Json to_json(const ScenarioConfig &c)
    {
        Json j;
        j["label"] = c.label;
        j["upa"] = to_json(c.upa);
        j["ofdm"] = to_json(c.ofdm);
        j["ue_pos"] = to_json(c.ue_pos);
        j["n_scatterers"] = c.n_scatterers;
        j["n_symbols"] = c.n_symbols;
        j["n_rf"] = c.n_rf;
        j["snr_db"] = c.snr_db;
        j["r_min"] = c.r_min;
        j["seed"] = c.seed;
        j["scatterer_curvature"] = c.scatterer_curvature;
        j["spacing_lo"] = c.spacing_lo;
        j["spacing_hi"] = c.spacing_hi;
        j["max_incidence_deg"] = c.max_incidence_deg;
        j["fixed_scatterers"] = Json::array();
        for (const auto &p : c.fixed_scatterers)
            j["fixed_scatterers"].push_back(to_json(p));
        return j;
    }

    ScenarioConfig scenario_config_from_json(const Json &j, ScenarioConfig c)
    {
        check_keys(j, {"label", "upa", "ofdm", "ue_pos", "n_scatterers", "n_symbols", "n_rf", "snr_db", "r_min", "seed",
                       "scatterer_curvature", "spacing_lo", "spacing_hi", "max_incidence_deg", "fixed_scatterers", "estimator"},
                   "scenario config");
        read(j, "label", c.label);
        if (j.contains("upa"))
            c.upa = upa_from_json(j["upa"], c.upa);
        if (j.contains("ofdm"))
            c.ofdm = ofdm_from_json(j["ofdm"], c.ofdm);
        if (j.contains("ue_pos"))
            c.ue_pos = vec3_from_json(j["ue_pos"]);
        read(j, "n_scatterers", c.n_scatterers);
        read(j, "n_symbols", c.n_symbols);
        read(j, "n_rf", c.n_rf);
        read(j, "snr_db", c.snr_db);
        read(j, "r_min", c.r_min);
        read(j, "seed", c.seed);
        read(j, "scatterer_curvature", c.scatterer_curvature);
        read(j, "spacing_lo", c.spacing_lo);
        read(j, "spacing_hi", c.spacing_hi);
        read(j, "max_incidence_deg", c.max_incidence_deg);
        if (j.contains("fixed_scatterers"))
        {
            c.fixed_scatterers.clear();
            for (const auto &p : j["fixed_scatterers"])
                c.fixed_scatterers.push_back(vec3_from_json(p));
        }
        return c;
    }

    Json to_json(const EstimatorConfig &c)
    {
        Json j;
        j["n_paths"] = c.n_paths;
        j["relax_max_iter"] = c.relax_max_iter;
        j["relax_tol"] = c.relax_tol;
        j["relax_pad"] = c.relax_pad;
        j["relax_energy_stop"] = c.relax_energy_stop;
        j["fft_zero_pad"] = c.fft_zero_pad;
        j["smooth_window"] = c.smooth_window;
        j["threshold_sigmas"] = c.threshold_sigmas;
        j["lm_max_iter_stage1"] = c.lm_max_iter_stage1;
        j["lm_max_iter_stage2"] = c.lm_max_iter_stage2;
        j["lm_lambda_init"] = c.lm_lambda_init;
        j["taylor_order"] = c.taylor_order;
        j["r_min"] = c.r_min;
        return j;
    }

    EstimatorConfig estimator_config_from_json(const Json &j, EstimatorConfig c)
    {
        check_keys(j, {"n_paths", "relax_max_iter", "relax_tol", "relax_pad", "relax_energy_stop", "fft_zero_pad", "smooth_window",
                       "threshold_sigmas", "lm_max_iter_stage1", "lm_max_iter_stage2", "lm_lambda_init", "taylor_order", "r_min"},
                   "estimator config");
        read(j, "n_paths", c.n_paths);
        read(j, "relax_max_iter", c.relax_max_iter);
        read(j, "relax_tol", c.relax_tol);
        read(j, "relax_pad", c.relax_pad);
        read(j, "relax_energy_stop", c.relax_energy_stop);
        read(j, "fft_zero_pad", c.fft_zero_pad);
        read(j, "smooth_window", c.smooth_window);
        read(j, "threshold_sigmas", c.threshold_sigmas);
        read(j, "lm_max_iter_stage1", c.lm_max_iter_stage1);
        read(j, "lm_max_iter_stage2", c.lm_max_iter_stage2);
        read(j, "lm_lambda_init", c.lm_lambda_init);
        read(j, "taylor_order", c.taylor_order);
        read(j, "r_min", c.r_min);
        return c;
    }

    Json to_json(const StageTimings &t)
    {
        Json j;
        j["relax"] = t.relax;
        j["recovery"] = t.recovery;
        j["curvature"] = t.curvature;
        j["direction"] = t.direction;
        j["stage1"] = t.stage1;
        j["stage2"] = t.stage2;
        j["reconstruct"] = t.reconstruct;
        j["total"] = t.total;
        return j;
    }

    Json scenario_to_json(const Scenario &sc, const std::string &channel_file)
    {
        Json j;
        j["format"] = "macaw-scenario/1";
        j["config"] = to_json(sc.config);
        j["paths"] = Json::array();
        for (std::size_t k = 0; k < sc.paths.size(); ++k)
        {
            Json p;
            p["geometry"] = to_json(sc.paths[k]);
            p["scatterer"] = to_json(sc.scatterers[k]);
            p["length"] = sc.path_lengths[k];
            p["params"] = to_json(sc.params[k]);
            j["paths"].push_back(p);
        }
        j["channel_shape"] = Json::array({sc.channel.rows(), sc.channel.cols()});
        if (!channel_file.empty())
            j["channel_file"] = channel_file;
        return j;
    }

    Scenario scenario_from_json(const Json &j)
    {
        check_keys(j, {"format", "config", "paths", "channel_shape", "channel_file"}, "scenario");
        if (j.value("format", std::string()) != "macaw-scenario/1")
            throw ValidationError("scenario: missing or unsupported format tag");
        Scenario sc;
        sc.config = scenario_config_from_json(j.at("config"));
        for (const auto &p : j.at("paths"))
        {
            check_keys(p, {"geometry", "scatterer", "length", "params"}, "scenario path");
            sc.paths.push_back(path_from_json(p.at("geometry")));
            sc.scatterers.push_back(vec3_from_json(p.at("scatterer")));
            sc.path_lengths.push_back(p.at("length").get<double>());
            sc.params.push_back(path_params_from_json(p.at("params")));
        }
        if (sc.params.empty())
            throw ValidationError("scenario: no paths");
        return sc;
    }
}
