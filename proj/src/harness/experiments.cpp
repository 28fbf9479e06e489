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

#include "macaw/harness/experiments.hpp"

#include "macaw/measurement.hpp"
#include "macaw/random.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

namespace macaw::harness
{
    std::uint64_t trial_seed(std::uint64_t seed, int trial)
    {
        return derive_seed(seed, 0x7121A100ULL + std::uint64_t(trial));
    }

    std::uint64_t operator_seed(std::uint64_t trial_seed)
    {
        return derive_seed(trial_seed, 0x0B5E11ULL);
    }

    std::uint64_t noise_seed(std::uint64_t trial_seed, double snr_db)
    {
        return derive_seed(trial_seed, std::bit_cast<std::uint64_t>(snr_db));
    }

    std::shared_ptr<const SketchOperator> make_operator(const ScenarioConfig &c, std::uint64_t seed)
    {
        return std::make_shared<const SketchOperator>(
            SketchOperator::make_srft(c.upa.n_elements(), c.n_observations(), seed, c.n_rf));
    }

    EstimatorConfig estimator_for(const Scenario &sc, EstimatorConfig base)
    {
        base.n_paths = int(sc.params.size());
        base.r_min = sc.config.r_min;
        return base;
    }

    TrialOutcome run_macaw(const Scenario &sc, double snr_db, std::uint64_t trial_seed, const EstimatorConfig &cfg)
    {
        TrialOutcome out;
        const auto op = make_operator(sc.config, operator_seed(trial_seed));
        const ObservationSet obs = observe(sc.channel, op, snr_db, noise_seed(trial_seed, snr_db));
        try
        {
            out.result = estimate(obs, cfg, sc.config.upa, sc.config.ofdm);
            out.timings = out.result.diagnostics.timings;
            out.nmse = nmse(out.result.h_hat, sc.channel);
        }
        catch (const Error &e)
        {
            out.error = e.what();
            out.nmse = 1.0; // Zero estimate
        }
        return out;
    }

    CMatrix swc_fitting_channel(const Scenario &sc, const SwcFitGrid &grid)
    {
        const Upa &upa = sc.config.upa;
        const double lambda = sc.config.wavelength();
        const Eigen::Index k_count = Eigen::Index(sc.params.size());
        CMatrix basis(sc.channel.size(), k_count);
        for (Eigen::Index k = 0; k < k_count; ++k)
        {
            const PathParams &p = sc.params[std::size_t(k)];
            const CMatrix c = awc_steering<double>(p.k_bar, p.q_bar, upa.n_y, upa.n_z);
            const SwcFit fit = best_swc_fit(c, upa, lambda, grid);
            PathParams sp = swc_index_params(fit.k_bar, fit.rho, upa.d_ant, lambda);
            sp.s_bar = p.s_bar;
            sp.alpha = 1.0;
            basis.col(k) = vec(wideband_path(sp, sc.config.ofdm, upa.n_y, upa.n_z));
        }
        const CVector alpha = basis.colPivHouseholderQr().solve(vec(sc.channel));
        const CVector h = basis * alpha;
        return Eigen::Map<const CMatrix>(h.data(), sc.channel.rows(), sc.channel.cols());
    }

    double median(std::vector<double> v)
    {
        if (v.empty())
            return std::nan("");
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

    std::vector<SweepRow> run_sweep(const SweepOptions &opt)
    {
        if (opt.trials < 1)
            throw Error(Errc::invalid_argument, "sweep needs at least one trial");
        if (opt.snrs.empty())
            throw Error(Errc::invalid_argument, "sweep needs at least one SNR");
        ScenarioConfig base = opt.base;
        if (opt.swc_mode)
            base.scatterer_curvature = 0.0;
        base.validate();

        const int n_snr = int(opt.snrs.size());
        std::vector<SweepRow> rows(std::size_t(n_snr) * std::size_t(opt.trials));
        parallel_for(opt.trials, opt.jobs, [&](int t) {
            const std::uint64_t ts = trial_seed(opt.seed, t);
            ScenarioConfig c = base;
            c.seed = ts;
            const Scenario sc = gen_scenario(c);
            const EstimatorConfig ec = estimator_for(sc, opt.estimator);
            for (int s = 0; s < n_snr; ++s)
            {
                const TrialOutcome o = run_macaw(sc, opt.snrs[std::size_t(s)], ts, ec);
                SweepRow &r = rows[std::size_t(s) * std::size_t(opt.trials) + std::size_t(t)];
                r.label = c.label + (opt.swc_mode ? " swc" : "");
                r.snr_db = opt.snrs[std::size_t(s)];
                r.trial = t;
                r.seed = ts;
                r.nmse = o.nmse;
                r.timings = o.timings;
                r.error = o.error;
            }
        });
        return rows;
    }

    namespace
    {
        std::string fmt(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.9g", v);
            return buf;
        }

        std::string csv_field(const std::string &s)
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char ch : s)
                q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }

        Summary summarize(const std::string &label, const std::string &method, double snr, const std::vector<double> &v)
        {
            Summary s;
            s.label = label;
            s.method = method;
            s.snr_db = snr;
            s.count = int(v.size());
            s.mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
            s.median = median(v);
            return s;
        }

        std::string timing_fields(const StageTimings &t)
        {
            return fmt(t.relax) + "," + fmt(t.recovery) + "," + fmt(t.curvature) + "," + fmt(t.direction) + "," +
                   fmt(t.stage1) + "," + fmt(t.stage2) + "," + fmt(t.total);
        }
    }

    std::vector<Summary> summarize_sweep(const std::vector<SweepRow> &rows)
    {
        std::vector<Summary> out;
        std::vector<std::pair<std::string, double>> keys;
        std::map<std::pair<std::string, double>, std::vector<double>> groups;
        for (const auto &r : rows)
        {
            const auto key = std::make_pair(r.label, r.snr_db);
            if (!groups.count(key))
                keys.push_back(key);
            groups[key].push_back(r.nmse);
        }
        for (const auto &k : keys)
            out.push_back(summarize(k.first, "macaw", k.second, groups[k]));
        return out;
    }

    std::string sweep_csv(const std::vector<SweepRow> &rows, bool with_timings)
    {
        std::string out = "# macaw-sweep v1\n";
        out += "kind,label,snr_db,trial,count,seed,nmse,median_nmse,error";
        if (with_timings)
            out += ",t_relax,t_recovery,t_curvature,t_direction,t_stage1,t_stage2,t_total";
        out += "\n";
        for (const auto &r : rows)
        {
            out += "trial," + csv_field(r.label) + "," + fmt(r.snr_db) + "," + std::to_string(r.trial) + ",," +
                   std::to_string(r.seed) + "," + fmt(r.nmse) + ",," + csv_field(r.error);
            if (with_timings)
                out += "," + timing_fields(r.timings);
            out += "\n";
        }
        for (const auto &s : summarize_sweep(rows))
        {
            out += "summary," + csv_field(s.label) + "," + fmt(s.snr_db) + ",," + std::to_string(s.count) + ",," +
                   fmt(s.mean) + "," + fmt(s.median) + ",";
            if (with_timings)
                out += ",,,,,,,";
            out += "\n";
        }
        return out;
    }

    std::vector<Table2Row> run_table2(const Table2Options &opt)
    {
        if (opt.trials < 1)
            throw Error(Errc::invalid_argument, "table2 needs at least one trial");
        const std::vector<ScenarioConfig> configs = experiment_configs(opt.exp);
        const int n_cfg = int(configs.size());
        std::vector<Table2Row> rows(std::size_t(2 * n_cfg * opt.trials));
        parallel_for(n_cfg * opt.trials, opt.jobs, [&](int i) {
            const int ci = i / opt.trials, t = i % opt.trials;
            const std::uint64_t ts = trial_seed(opt.seed, t);
            ScenarioConfig c = configs[std::size_t(ci)];
            c.seed = ts;
            const Scenario sc = gen_scenario(c);

            Table2Row &m = rows[std::size_t(2 * i)];
            const TrialOutcome o = run_macaw(sc, opt.snr_db, ts, estimator_for(sc, opt.estimator));
            m = {opt.exp, c.label, "macaw", t, ts, o.nmse, o.timings.total, o.error};

            Table2Row &s = rows[std::size_t(2 * i + 1)];
            const auto t0 = std::chrono::steady_clock::now();
            s = {opt.exp, c.label, "swc_fitting", t, ts, 1.0, 0.0, ""};
            try
            {
                s.nmse = nmse(swc_fitting_channel(sc, opt.grid), sc.channel);
            }
            catch (const Error &e)
            {
                s.error = e.what();
            }
            s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        });
        return rows;
    }

    std::vector<Summary> summarize_table2(const std::vector<Table2Row> &rows)
    {
        std::vector<Summary> out;
        std::vector<std::pair<std::string, std::string>> keys;
        std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
        for (const auto &r : rows)
        {
            const auto key = std::make_pair(r.label, r.method);
            if (!groups.count(key))
                keys.push_back(key);
            groups[key].push_back(r.nmse);
        }
        for (const auto &k : keys)
            out.push_back(summarize(k.first, k.second, std::nan(""), groups[k]));
        return out;
    }

    std::string table2_csv(const std::vector<Table2Row> &rows, bool with_timings)
    {
        std::string out = "# macaw-table2 v1\n";
        out += "kind,exp,label,method,trial,count,seed,nmse,median_nmse,error";
        if (with_timings)
            out += ",seconds";
        out += "\n";
        const int exp = rows.empty() ? 0 : rows.front().exp;
        for (const auto &r : rows)
        {
            out += "trial," + std::to_string(r.exp) + "," + csv_field(r.label) + "," + r.method + "," + std::to_string(r.trial) +
                   ",," + std::to_string(r.seed) + "," + fmt(r.nmse) + ",," + csv_field(r.error);
            if (with_timings)
                out += "," + fmt(r.seconds);
            out += "\n";
        }
        for (const auto &s : summarize_table2(rows))
        {
            out += "summary," + std::to_string(exp) + "," + csv_field(s.label) + "," + s.method + ",," + std::to_string(s.count) +
                   ",," + fmt(s.mean) + "," + fmt(s.median) + ",";
            if (with_timings)
                out += ",";
            out += "\n";
        }
        return out;
    }

    std::string bound_csv(const std::vector<BoundSample> &rows)
    {
        std::string out = "# macaw-bound v1\nbin,index,n,mu_star,cos_sim,bound\n";
        for (const auto &r : rows)
            out += std::to_string(r.bin) + "," + std::to_string(r.index) + "," + std::to_string(r.n) + "," + fmt(r.mu_star) +
                   "," + fmt(r.cos_sim) + "," + fmt(r.bound) + "\n";
        return out;
    }
}
