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

#include "macaw/harness/commands.hpp"

#include "macaw/harness/binary_io.hpp"
#include "macaw/harness/experiments.hpp"
#include "macaw/harness/manifest.hpp"
#include "macaw/harness/serialize.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>

namespace fs = std::filesystem;

namespace macaw::harness
{
    namespace
    {
        struct Globals
        {
            std::uint64_t seed = 1;
            bool seed_set = false;
            int jobs = 1;
            std::string out;
            std::string config;
            bool noiseless = false;
            std::string format;
        };

        std::string pick_format(const Globals &g, const char *fallback)
        {
            const std::string f = g.format.empty() ? fallback : g.format;
            if (f != "csv" && f != "json")
                throw ValidationError("--format must be csv or json");
            return f;
        }

        // Writes the result to --out (plus its manifest) or to the stream
        void emit(const Globals &g, std::ostream &out, const std::string &content, const std::string &deterministic,
                  RunManifest manifest, const std::vector<OutputRecord> &extra = {})
        {
            if (g.out.empty())
            {
                out << content;
                return;
            }
            write_file(g.out, content);
            manifest.outputs = extra;
            manifest.outputs.push_back({fs::path(g.out).filename().string(), git_blob_sha1(content), git_blob_sha1(deterministic)});
            write_json(manifest_path(g.out), to_json(manifest));
        }

        ScenarioConfig load_scenario_config(const Globals &g)
        {
            ScenarioConfig c = g.config.empty() ? table1_defaults() : scenario_config_from_json(read_json(g.config));
            if (g.seed_set)
                c.seed = g.seed;
            return c;
        }

        EstimatorConfig load_estimator_config(const Globals &g)
        {
            if (g.config.empty())
                return {};
            const Json j = read_json(g.config);
            return estimator_config_from_json(j.contains("estimator") ? j["estimator"] : j);
        }

        Json estimator_section(const std::string &config_path)
        {
            if (config_path.empty())
                return Json::object();
            const Json j = read_json(config_path);
            return j.contains("estimator") ? j["estimator"] : Json::object();
        }

        void cmd_scenario(const Globals &g, const std::vector<std::string> &args, std::ostream &out)
        {
            const ScenarioConfig c = load_scenario_config(g);
            const Scenario sc = gen_scenario(c);
            RunManifest m = make_manifest("scenario", args, to_json(c));
            if (g.out.empty())
            {
                out << scenario_to_json(sc, "").dump(2) << "\n";
                return;
            }
            const fs::path json_path(g.out);
            fs::path bin_path = json_path;
            bin_path.replace_extension(".channel.bin");
            const std::string bin = encode_binary(to_binary(sc.channel));
            write_file(bin_path, bin);
            const std::string text = scenario_to_json(sc, bin_path.filename().string()).dump(2) + "\n";
            const std::string h = git_blob_sha1(bin);
            emit(g, out, text, text, m, {{bin_path.filename().string(), h, h}});
        }

        void cmd_estimate(const Globals &g, const std::vector<std::string> &args, std::ostream &out, const std::string &file,
                          std::optional<double> snr_opt)
        {
            const Json sj = read_json(file);
            const Scenario parsed = scenario_from_json(sj);
            Scenario sc = parsed;
            if (sj.contains("channel_file"))
            {
                const fs::path bin = fs::path(file).parent_path() / sj["channel_file"].get<std::string>();
                sc.channel = matrix_from_binary(read_binary(bin));
                if (sc.channel.rows() != sc.config.upa.n_elements() || sc.channel.cols() != sc.config.ofdm.n_subcarriers)
                    throw ValidationError("channel dump shape does not match the scenario");
            }
            else
                sc.channel = synth_channel(sc.params, sc.config.ofdm, sc.config.upa);

            const double snr = g.noiseless ? std::numeric_limits<double>::infinity() : snr_opt.value_or(sc.config.snr_db);
            const std::uint64_t seed = g.seed_set ? g.seed : sc.config.seed;
            const EstimatorConfig ec = estimator_for(sc, load_estimator_config(g));
            const TrialOutcome o = run_macaw(sc, snr, seed, ec);
            if (!o.error.empty())
                throw std::runtime_error("estimation failed: " + o.error);

            Json j;
            j["format"] = "macaw-estimate/1";
            j["scenario"] = file;
            j["noiseless"] = std::isinf(snr);
            j["snr_db"] = std::isinf(snr) ? Json(nullptr) : Json(snr);
            j["seed"] = seed;
            j["nmse"] = o.nmse;
            j["params"] = Json::array();
            for (const auto &p : o.result.params)
                j["params"].push_back(to_json(p));
            j["paths"] = Json::array();
            for (const auto &d : o.result.diagnostics.paths)
                j["paths"].push_back({{"dropped", d.dropped},
                                      {"error", d.error},
                                      {"relax_energy", d.relax_energy},
                                      {"empty_box", d.empty_box},
                                      {"curvature_q_bar", to_json(d.curvature.q_bar)},
                                      {"stage1_iterations", d.stage1_iterations}});
            j["stage2_iterations"] = o.result.diagnostics.stage2_iterations;
            j["stage2_error"] = o.result.diagnostics.stage2_error;
            const std::string deterministic = j.dump(2) + "\n";
            j["timings"] = to_json(o.timings);

            Json cfg;
            cfg["scenario_hash"] = git_blob_sha1(read_file(file));
            cfg["snr_db"] = j["snr_db"];
            cfg["seed"] = seed;
            cfg["estimator"] = to_json(ec);
            emit(g, out, j.dump(2) + "\n", deterministic, make_manifest("estimate", args, cfg));
        }

        void cmd_sweep(const Globals &g, const std::vector<std::string> &args, std::ostream &out, const std::vector<double> &snrs,
                       int trials, const std::string &mode)
        {
            SweepOptions opt;
            opt.base = load_scenario_config(g);
            if (!g.config.empty())
                opt.estimator = estimator_config_from_json(estimator_section(g.config));
            opt.snrs = snrs;
            opt.trials = trials;
            opt.seed = g.seed;
            opt.jobs = g.jobs;
            if (mode != "awc" && mode != "swc")
                throw ValidationError("--mode must be awc or swc");
            opt.swc_mode = mode == "swc";
            const std::string format = pick_format(g, "csv");
            const auto rows = run_sweep(opt);

            std::string content, deterministic;
            if (format == "csv")
            {
                content = sweep_csv(rows, true);
                deterministic = sweep_csv(rows, false);
            }
            else
            {
                Json j, d;
                j["format"] = "macaw-sweep/1";
                j["rows"] = Json::array();
                for (const auto &r : rows)
                    j["rows"].push_back({{"label", r.label}, {"snr_db", r.snr_db}, {"trial", r.trial}, {"seed", r.seed},
                                         {"nmse", r.nmse}, {"error", r.error}});
                j["summary"] = Json::array();
                for (const auto &s : summarize_sweep(rows))
                    j["summary"].push_back({{"label", s.label}, {"snr_db", s.snr_db}, {"count", s.count}, {"mean_nmse", s.mean},
                                            {"median_nmse", s.median}});
                deterministic = j.dump(2) + "\n";
                for (std::size_t i = 0; i < rows.size(); ++i)
                    j["rows"][i]["timings"] = to_json(rows[i].timings);
                content = j.dump(2) + "\n";
            }
            Json cfg;
            cfg["scenario"] = to_json(opt.base);
            cfg["estimator"] = to_json(opt.estimator);
            cfg["snrs"] = snrs;
            cfg["trials"] = trials;
            cfg["mode"] = mode;
            cfg["seed"] = g.seed;
            emit(g, out, content, deterministic, make_manifest("sweep", args, cfg));
        }

        void cmd_table2(const Globals &g, const std::vector<std::string> &args, std::ostream &out, int exp, int trials, double snr)
        {
            if (exp < 1 || exp > 4)
                throw ValidationError("--exp must be 1..4");
            Table2Options opt;
            opt.exp = exp;
            opt.trials = trials;
            opt.snr_db = snr;
            opt.seed = g.seed;
            opt.jobs = g.jobs;
            opt.estimator = load_estimator_config(g);
            const std::string format = pick_format(g, "csv");
            const auto rows = run_table2(opt);

            std::string content, deterministic;
            if (format == "csv")
            {
                content = table2_csv(rows, true);
                deterministic = table2_csv(rows, false);
            }
            else
            {
                Json j;
                j["format"] = "macaw-table2/1";
                j["rows"] = Json::array();
                for (const auto &r : rows)
                    j["rows"].push_back({{"exp", r.exp}, {"label", r.label}, {"method", r.method}, {"trial", r.trial},
                                         {"seed", r.seed}, {"nmse", r.nmse}, {"error", r.error}});
                j["summary"] = Json::array();
                for (const auto &s : summarize_table2(rows))
                    j["summary"].push_back({{"label", s.label}, {"method", s.method}, {"count", s.count}, {"mean_nmse", s.mean},
                                            {"median_nmse", s.median}});
                deterministic = j.dump(2) + "\n";
                for (std::size_t i = 0; i < rows.size(); ++i)
                    j["rows"][i]["seconds"] = rows[i].seconds;
                content = j.dump(2) + "\n";
            }
            Json cfg;
            cfg["exp"] = exp;
            cfg["trials"] = trials;
            cfg["snr_db"] = snr;
            cfg["seed"] = g.seed;
            cfg["estimator"] = to_json(opt.estimator);
            emit(g, out, content, deterministic, make_manifest("table2", args, cfg));
        }

        void cmd_bound(const Globals &g, const std::vector<std::string> &args, std::ostream &out, int samples, int bins, double mu_max)
        {
            if (bins < 1 || samples < bins || samples % bins != 0)
                throw ValidationError("--samples must be a positive multiple of --bins");
            if (!(mu_max > 0))
                throw ValidationError("--mu-max must be positive");
            BoundExperimentConfig cfg;
            cfg.n_bins = bins;
            cfg.per_bin = samples / bins;
            cfg.mu_max = mu_max;
            const std::string format = pick_format(g, "csv");
            const auto rows = bound_experiment(cfg, g.seed, g.jobs);

            std::string content;
            if (format == "csv")
                content = bound_csv(rows);
            else
            {
                Json j;
                j["format"] = "macaw-bound/1";
                j["rows"] = Json::array();
                for (const auto &r : rows)
                    j["rows"].push_back({{"bin", r.bin}, {"index", r.index}, {"n", r.n}, {"mu_star", r.mu_star},
                                         {"cos_sim", r.cos_sim}, {"bound", r.bound}});
                content = j.dump(2) + "\n";
            }
            Json c;
            c["samples"] = samples;
            c["bins"] = bins;
            c["mu_max"] = mu_max;
            c["seed"] = g.seed;
            emit(g, out, content, content, make_manifest("bound", args, c));
        }

        void cmd_rayleigh(const Globals &g, const std::vector<std::string> &args, std::ostream &out, const RayleighCase &rc)
        {
            const RayleighResult r = rayleigh_distance(rc);
            const std::string format = pick_format(g, "json");
            Json c;
            c["incident_curvature"] = rc.incident_curvature;
            c["surface_curvature"] = rc.surface_curvature;
            c["incidence_deg"] = rc.incidence_deg;
            c["n"] = rc.n;
            c["d_ant"] = rc.d_ant;
            c["wavelength"] = rc.wavelength;
            c["target_mu"] = rc.target_mu;
            std::string content;
            if (format == "json")
            {
                Json j;
                j["format"] = "macaw-rayleigh/1";
                j["case"] = c;
                j["distance"] = r.distance;
                j["mu_at_distance"] = r.mu_at_distance;
                j["bound_at_distance"] = r.bound_at_distance;
                j["q1"] = r.q1;
                j["q2"] = r.q2;
                content = j.dump(2) + "\n";
            }
            else
            {
                char buf[256];
                std::snprintf(buf, sizeof(buf), "distance,mu_at_distance,bound_at_distance,q1,q2\n%.9g,%.9g,%.9g,%.9g,%.9g\n",
                              r.distance, r.mu_at_distance, r.bound_at_distance, r.q1, r.q2);
                content = buf;
            }
            emit(g, out, content, content, make_manifest("rayleigh", args, c));
        }

        int exit_code_for(const Error &e)
        {
            switch (e.code())
            {
            case Errc::invalid_argument:
            case Errc::shape_mismatch:
            case Errc::too_many_rows:
                return kExitValidation;
            default:
                return kExitRuntime;
            }
        }
    }

    int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"macaw: anisotropic-wavefront channel simulation and estimation", "macaw"};
        app.require_subcommand(1);
        app.fallthrough();

        Globals g;
        app.add_option("--seed", g.seed, "Base seed")->each([&](const std::string &) { g.seed_set = true; });
        app.add_option("--jobs", g.jobs, "Concurrent trials")->check(CLI::PositiveNumber);
        app.add_option("--out", g.out, "Output file (default: stdout)");
        app.add_option("--config", g.config, "JSON configuration file");
        app.add_flag("--noiseless", g.noiseless, "Disable receiver noise");
        app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

        auto *scenario = app.add_subcommand("scenario", "Generate a scenario and its ground-truth channel");

        auto *estimate = app.add_subcommand("estimate", "Run the estimator on a scenario file");
        std::string scenario_file;
        std::optional<double> snr_opt;
        estimate->add_option("scenario", scenario_file, "Scenario JSON")->required();
        estimate->add_option("--snr", snr_opt, "SNR [dB] (default: the scenario's)");

        auto *sweep = app.add_subcommand("sweep", "Monte-Carlo NMSE versus SNR");
        std::vector<double> snrs{-20, -15, -10, -5, 0, 5, 10};
        int sweep_trials = 100;
        std::string mode = "awc";
        sweep->add_option("--snr", snrs, "Comma-separated SNR list [dB]")->delimiter(',')->allow_extra_args(false);
        sweep->add_option("--trials", sweep_trials, "Trials per SNR");
        sweep->add_option("--mode", mode, "awc or swc (flat reflectors)");

        auto *table2 = app.add_subcommand("table2", "Modeling-deviation experiments 1-4");
        int exp = 1, t2_trials = 10;
        double t2_snr = 10.0;
        table2->add_option("--exp", exp, "Experiment 1..4")->required();
        table2->add_option("--trials", t2_trials, "Trials per configuration");
        table2->add_option("--snr", t2_snr, "SNR for the estimator [dB]");

        auto *bound = app.add_subcommand("bound", "Randomised check of the spherical-fit similarity bound");
        int samples = 1000, bins = 20;
        double mu_max = 10.0;
        bound->add_option("--samples", samples, "Total samples");
        bound->add_option("--bins", bins, "Equal-width mu* bins");
        bound->add_option("--mu-max", mu_max, "Upper end of the mu* range");

        auto *rayleigh = app.add_subcommand("rayleigh", "Distance at which a reflected wavefront becomes spherical-like");
        RayleighCase rc;
        rayleigh->add_option("--incident-curvature", rc.incident_curvature, "Incident wave curvature [1/m], 0 = plane");
        rayleigh->add_option("--surface-curvature", rc.surface_curvature, "Cylinder curvature [1/m]");
        rayleigh->add_option("--incidence-deg", rc.incidence_deg, "Incidence angle [deg]");
        rayleigh->add_option("--n", rc.n, "Array side length");
        rayleigh->add_option("--d", rc.d_ant, "Element spacing [m]");
        rayleigh->add_option("--lambda", rc.wavelength, "Wavelength [m]");
        rayleigh->add_option("--target-mu", rc.target_mu, "Anisotropy threshold");

        try
        {
            std::vector<std::string> rev(args.rbegin(), args.rend());
            app.parse(rev);
        }
        catch (const CLI::ParseError &e)
        {
            const int code = app.exit(e, out, err);
            return code == 0 ? kExitOk : kExitValidation;
        }

        try
        {
            if (*scenario)
                cmd_scenario(g, args, out);
            else if (*estimate)
                cmd_estimate(g, args, out, scenario_file, snr_opt);
            else if (*sweep)
                cmd_sweep(g, args, out, snrs, sweep_trials, mode);
            else if (*table2)
                cmd_table2(g, args, out, exp, t2_trials, t2_snr);
            else if (*bound)
                cmd_bound(g, args, out, samples, bins, mu_max);
            else if (*rayleigh)
                cmd_rayleigh(g, args, out, rc);
            return kExitOk;
        }
        catch (const ValidationError &e)
        {
            err << "error: " << e.what() << "\n";
            return kExitValidation;
        }
        catch (const IoError &e)
        {
            err << "error: " << e.what() << "\n";
            return kExitIo;
        }
        catch (const Error &e)
        {
            err << "error: " << e.what() << "\n";
            return exit_code_for(e);
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << "\n";
            return kExitRuntime;
        }
    }
}
