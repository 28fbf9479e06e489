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

// Acceptance checks. `macaw_acceptance N` runs criterion N (1..8); with no argument all run.
// Each criterion prints one "criterion N: PASS|FAIL ..." line and the exit status is non-zero on any FAIL.

#include "macaw/estimator.hpp"
#include "macaw/fft.hpp"
#include "macaw/harness/experiments.hpp"
#include "macaw/measurement.hpp"
#include "macaw/random.hpp"
#include "macaw/scenario.hpp"
#include "macaw/swc_similarity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace macaw;
using namespace macaw::harness;

namespace
{
    constexpr double kInf = std::numeric_limits<double>::infinity();

    int jobs()
    {
        return int(std::max(1u, std::thread::hardware_concurrency()));
    }

    double seconds_since(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    struct Verdict
    {
        bool pass = true;
        std::ostringstream detail;

        void require(bool ok, const std::string &what)
        {
            if (!ok)
            {
                pass = false;
                detail << " [failed: " << what << "]";
            }
        }
    };

    bool non_increasing(const std::vector<double> &v)
    {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[i - 1])
                return false;
        return true;
    }

    bool strictly_decreasing(const std::vector<double> &v)
    {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (!(v[i] < v[i - 1]))
                return false;
        return true;
    }

    Upa square_upa(int n, double d = 0.01)
    {
        Upa u;
        u.n_y = u.n_z = n;
        u.d_ant = d;
        return u;
    }

    PathParams curved_path()
    {
        PathParams p;
        p.k_bar = Vec2d(0.1, -0.05);
        p.q_bar << 2e-4, 5e-5, 5e-5, 1e-4;
        p.s_bar = 1800.3;
        p.alpha = std::polar(0.02, 0.7);
        return p;
    }

    // Rayleigh-criterion distances of the reflected cylinder wave
    void criterion1(Verdict &v)
    {
        const auto t0 = std::chrono::steady_clock::now();
        RayleighCase plane;
        RayleighCase sphere;
        sphere.incident_curvature = 1.0 / 15.0;
        const double a = rayleigh_distance(plane).distance;
        const double b = rayleigh_distance(sphere).distance;
        const double dt = seconds_since(t0);
        v.detail << "plane " << a << " m, spherical " << b << " m, " << dt << " s";
        v.require(std::abs(a / 108.7 - 1.0) <= 0.01, "plane-wave distance 108.7 m within 1%");
        v.require(std::abs(b / 33.0 - 1.0) <= 0.01, "spherical-wave distance 33.0 m within 1%");
        v.require(dt < 1.0, "runtime < 1 s");
    }

    void criterion2(Verdict &v)
    {
        const double b59 = similarity_bound(0.59), b0 = similarity_bound(0.0);
        v.detail.precision(17);
        v.detail << "bound(0.59) = " << b59 << ", bound(0) = " << b0;
        v.require(std::abs(b59 - 0.90) <= 0.005, "bound(0.59) = 0.90 +- 0.005");
        v.require(b0 == 1.0, "bound(0) == 1 exactly");
    }

    // Randomised bound check: 20 bins x 50 samples on 64..128 arrays
    void criterion3(Verdict &v)
    {
        const auto t0 = std::chrono::steady_clock::now();
        BoundExperimentConfig cfg;
        cfg.n_bins = 20;
        cfg.per_bin = 50;
        const std::vector<BoundSample> samples = bound_experiment(cfg, 2026, jobs());
        const double dt = seconds_since(t0);

        std::vector<std::vector<const BoundSample *>> bins(std::size_t(cfg.n_bins));
        for (const auto &s : samples)
            bins[std::size_t(s.bin)].push_back(&s);
        int ok = 0, filled = 0;
        std::vector<double> medians;
        for (const auto &b : bins)
        {
            if (b.empty())
                continue;
            ++filled;
            const BoundSample *worst = *std::min_element(b.begin(), b.end(), [](auto *x, auto *y) { return x->cos_sim < y->cos_sim; });
            ok += worst->cos_sim >= worst->bound - 0.03;
            std::vector<double> c;
            for (const auto *s : b)
                c.push_back(s->cos_sim);
            medians.push_back(median(c));
        }
        v.detail << samples.size() << " samples, " << ok << "/" << filled << " bin minima above bound - 0.03, medians";
        for (double m : medians)
            v.detail << " " << std::round(m * 1e4) / 1e4;
        v.detail << ", " << dt << " s";
        v.require(samples.size() == 1000, "1000 samples");
        v.require(filled == cfg.n_bins, "every bin populated");
        v.require(ok >= 0.95 * filled, ">= 95% of bin minima satisfy the bound");
        v.require(non_increasing(medians), "bin medians monotone decreasing");
        v.require(dt < 600.0, "runtime < 10 min");
    }

    // Noiseless pipeline on Table I scenarios
    void criterion4(Verdict &v)
    {
        double worst = 0.0, slowest = 0.0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            ScenarioConfig c = table1_defaults();
            c.seed = seed;
            const Scenario sc = gen_scenario(c);
            const auto t0 = std::chrono::steady_clock::now();
            const TrialOutcome o = run_macaw(sc, kInf, seed, estimator_for(sc));
            slowest = std::max(slowest, seconds_since(t0));
            worst = std::max(worst, o.nmse);
            if (!o.error.empty())
                v.require(false, "seed " + std::to_string(seed) + ": " + o.error);
        }
        v.detail << "worst NMSE " << worst << " over 3 scenarios, slowest " << slowest << " s";
        v.require(worst < 1e-8, "NMSE < 1e-8");
        v.require(slowest < 60.0, "runtime < 60 s per scenario");
    }

    // NMSE versus SNR at Table I defaults
    void criterion5(Verdict &v)
    {
        const auto t0 = std::chrono::steady_clock::now();
        SweepOptions opt;
        opt.snrs = {-20, -15, -10, -5, 0, 5, 10};
        opt.trials = 25;
        opt.seed = 5;
        opt.jobs = jobs();
        const auto rows = run_sweep(opt);
        const auto summary = summarize_sweep(rows);
        const double dt = seconds_since(t0);

        std::map<double, Summary> by_snr;
        for (const auto &s : summary)
            by_snr[s.snr_db] = s;
        std::vector<double> medians;
        for (double snr : opt.snrs)
        {
            medians.push_back(by_snr[snr].median);
            v.detail << " " << snr << "dB mean " << by_snr[snr].mean << " median " << by_snr[snr].median << ";";
        }
        int failed = 0;
        for (const auto &r : rows)
            failed += !r.error.empty();
        v.detail << " failed trials " << failed << ", " << dt << " s";
        v.require(by_snr[10].mean <= 1e-3, "mean NMSE <= 1e-3 at 10 dB");
        v.require(by_snr[-10].mean <= 5e-2, "mean NMSE <= 5e-2 at -10 dB");
        v.require(non_increasing(medians), "median NMSE non-increasing over SNR");
        v.require(dt < 3600.0, "runtime < 1 h");
    }

    // Modeling-deviation experiments
    void criterion6(Verdict &v)
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::map<int, std::vector<double>> swc;
        double worst_macaw = 0.0;
        for (int exp = 1; exp <= 4; ++exp)
        {
            Table2Options opt;
            opt.exp = exp;
            opt.trials = 10;
            opt.snr_db = 10.0;
            opt.seed = 6;
            opt.jobs = jobs();
            const auto rows = run_table2(opt);
            v.detail << " exp" << exp << ":";
            for (const auto &s : summarize_table2(rows))
            {
                v.detail << " " << s.label << "/" << s.method << "=" << s.mean;
                if (s.method == "swc_fitting")
                    swc[exp].push_back(s.mean);
                else
                {
                    worst_macaw = std::max(worst_macaw, s.mean);
                    v.require(s.mean < 1e-3, "MACAW < 1e-3 in exp " + std::to_string(exp) + " " + s.label);
                }
            }
        }
        v.detail << "; worst MACAW cell " << worst_macaw << ", " << seconds_since(t0) << " s";
        v.require(swc[1].size() == 3 && strictly_decreasing(swc[1]), "SWC-Fitting strictly decreasing over exp 1 distances");
        v.require(swc[4].size() == 3 && std::is_sorted(swc[4].begin(), swc[4].end()) &&
                      std::adjacent_find(swc[4].begin(), swc[4].end()) == swc[4].end(),
                  "SWC-Fitting strictly increasing over exp 4 curvatures");
        v.require(!swc[4].empty() && swc[4][0] < 1e-4, "SWC-Fitting < 1e-4 at curvature 0");
    }

    // Estimator micro-oracles
    void criterion7(Verdict &v)
    {
        // (a) Curvature from a noiseless 128x128 steering matrix
        {
            const int n = 128;
            Mat2d q;
            q << 2e-4, 5e-5, 5e-5, 1e-4;
            const EstimatorConfig cfg;
            const CurvatureEstimate est = estimate_curvature(awc_steering<double>(Vec2d(0.1, -0.05), q, n, n), cfg, square_upa(n), 0.02);
            const int lag = int(std::lround(n / 3.0));
            const double bin = 1.0 / double(fft::next_pow2(Eigen::Index(cfg.fft_zero_pad) * (n - lag)));
            const double err = (est.q_bar - q).cwiseAbs().maxCoeff() / (bin / lag);
            v.detail << "(a) curvature error " << err << " bins;";
            v.require(err <= 2.0, "(a) curvature within 2 interpolated bins");
        }

        // (b) Analytic Jacobians against central differences
        {
            Rng rng(71);
            double worst = 0.0;
            const Upa upa = square_upa(32);
            const SketchOperator op = SketchOperator::make_srft(1024, 128, 7, 16);
            CVector y(128);
            for (auto &x : y)
                x = rng.complex_normal(1.0);
            for (int t = 0; t < 10; ++t)
            {
                Eigen::Matrix<double, 5, 1> theta;
                theta << rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(0, 1e-3), rng.uniform(-2e-4, 2e-4), rng.uniform(0, 1e-3);
                const cdouble beta = rng.complex_normal(1.0);
                CVector r;
                CMatrix j;
                stage1_residual_jacobian(y, op, upa, theta, beta, &r, &j);
                for (int p = 0; p < 5; ++p)
                {
                    const double h = 1e-6;
                    Eigen::Matrix<double, 5, 1> tp = theta, tm = theta;
                    tp(p) += h;
                    tm(p) -= h;
                    CVector rp, rm;
                    stage1_residual_jacobian(y, op, upa, tp, beta, &rp, nullptr);
                    stage1_residual_jacobian(y, op, upa, tm, beta, &rm, nullptr);
                    worst = std::max(worst, (j.col(p) - (rp - rm) / (2 * h)).norm() / j.col(p).norm());
                }
            }

            const Upa small = square_upa(16);
            const OfdmConfig ofdm{15e9, 100e6, 16};
            auto op2 = std::make_shared<const SketchOperator>(SketchOperator::make_srft(256, 64, 11, 16));
            ObservationSet obs;
            obs.op = op2;
            obs.y.resize(64, 16);
            for (Eigen::Index i = 0; i < obs.y.size(); ++i)
                obs.y.data()[i] = rng.complex_normal(1.0);
            for (int t = 0; t < 5; ++t)
            {
                std::vector<PathParams> params{curved_path(), curved_path()};
                for (auto &p : params)
                {
                    p.k_bar = Vec2d(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
                    p.s_bar = rng.uniform(1000.0, 3000.0);
                    p.alpha = rng.complex_normal(1e-4);
                }
                CVector r;
                CMatrix j;
                stage2_residual_jacobian(obs, *op2, params, ofdm, small, -1, &r, &j);
                for (int c = 0; c < 12; ++c)
                {
                    auto shifted = [&](double s) {
                        std::vector<PathParams> q = params;
                        PathParams &p = q[std::size_t(c / 6)];
                        switch (c % 6)
                        {
                        case 0: p.s_bar += s; break;
                        case 1: p.k_bar(0) += s; break;
                        case 2: p.k_bar(1) += s; break;
                        case 3: p.q_bar(0, 0) += s; break;
                        case 4: p.q_bar(0, 1) += s, p.q_bar(1, 0) += s; break;
                        default: p.q_bar(1, 1) += s; break;
                        }
                        CVector out;
                        stage2_residual_jacobian(obs, *op2, q, ofdm, small, -1, &out, nullptr);
                        return out;
                    };
                    const double h = 1e-6;
                    worst = std::max(worst, (j.col(c) - (shifted(h) - shifted(-h)) / (2 * h)).norm() / j.col(c).norm());
                }
            }
            v.detail << " (b) worst Jacobian error " << worst << ";";
            v.require(worst < 1e-5, "(b) Jacobians within 1e-5 of central differences");
        }

        // (c), (d) SRFT at Table I size
        {
            const SketchOperator w = SketchOperator::make_srft(16384, 256, 73, 16);
            const CMatrix wwh = w.apply(w.apply_adjoint(CMatrix(CMatrix::Identity(256, 256))));
            const double dev = (wwh - CMatrix::Identity(256, 256)).cwiseAbs().maxCoeff();
            Rng rng(74);
            double adj = 0.0;
            for (int t = 0; t < 20; ++t)
            {
                CVector x(16384), y(256);
                for (auto &e : x)
                    e = rng.complex_normal(1.0);
                for (auto &e : y)
                    e = rng.complex_normal(1.0);
                const cdouble lhs = w.apply(x).dot(y), rhs = x.dot(w.apply_adjoint(y));
                adj = std::max(adj, std::abs(lhs - rhs) / (x.norm() * y.norm()));
            }
            v.detail << " (c) max |WW^H - I| " << dev << "; (d) adjoint gap " << adj << ";";
            v.require(dev < 1e-10, "(c) W W^H = I within 1e-10");
            v.require(adj < 1e-10, "(d) adjoint identity within 1e-10");
        }

        // (e) Accepted LM steps never raise the cost, 100 random starts per stage
        {
            const int n = 32;
            const Upa upa = square_upa(n);
            const PathParams p = curved_path();
            const SketchOperator op = SketchOperator::make_srft(1024, 128, 10, 16);
            Rng rng(75);
            const CVector clean = op.apply(CVector(p.alpha * vec(awc_steering(p.k_bar, p.q_bar, n, n))));
            CVector y = clean;
            for (auto &e : y)
                e += rng.complex_normal(1e-3 * clean.squaredNorm() / double(clean.size()));

            const OfdmConfig ofdm{15e9, 100e6, 32};
            auto op2 = std::make_shared<const SketchOperator>(SketchOperator::make_srft(1024, 64, 12, 16));
            const ObservationSet obs = observe(wideband_path(p, ofdm, n, n), op2, 10.0, 76);

            int bad = 0;
            for (int t = 0; t < 100; ++t)
            {
                PathParams init = p;
                init.k_bar += Vec2d(rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02));
                init.q_bar(0, 0) += rng.uniform(-1e-3, 1e-3);
                init.q_bar(1, 1) += rng.uniform(-1e-3, 1e-3);
                const double off = rng.uniform(-5e-4, 5e-4);
                init.q_bar(0, 1) += off;
                init.q_bar(1, 0) += off;
                bad += !non_increasing(refine_stage1(y, op, upa, init, EstimatorConfig{}).report.cost_history);

                init.s_bar += rng.uniform(-2.0, 2.0);
                bad += !non_increasing(refine_stage2(obs, *op2, {init}, ofdm, upa, EstimatorConfig{}).report.cost_history);
            }
            v.detail << " (e) " << bad << " non-monotone runs of 200";
            v.require(bad == 0, "(e) LM cost monotone");
        }
    }

    // estimate() wall time against N log N at N = 32^2, 64^2, 128^2 with R and r_min scaled with N
    void criterion8(Verdict &v)
    {
        std::vector<double> ns, ts;
        for (int side : {32, 64, 128})
        {
            ScenarioConfig c = table1_defaults();
            c.upa.n_y = c.upa.n_z = side;
            c.n_symbols = std::max(1, c.n_symbols * side * side / (128 * 128));
            c.r_min = default_r_min(c.upa, c.wavelength());
            double best = kInf;
            for (std::uint64_t seed = 1; seed <= 3; ++seed)
            {
                c.seed = seed;
                const Scenario sc = gen_scenario(c);
                const EstimatorConfig cfg = estimator_for(sc);
                const auto op = make_operator(c, seed);
                const ObservationSet obs = observe(sc.channel, op, 10.0, seed);
                const auto t0 = std::chrono::steady_clock::now();
                (void)estimate(obs, cfg, c.upa, c.ofdm);
                best = std::min(best, seconds_since(t0));
            }
            const double n = double(side) * side;
            ns.push_back(n);
            ts.push_back(best);
        }
        // Least-squares fit of log t = log c + log(N log N)
        double log_c = 0.0;
        for (std::size_t i = 0; i < ns.size(); ++i)
            log_c += std::log(ts[i] / (ns[i] * std::log2(ns[i])));
        log_c /= double(ns.size());
        double worst = 1.0;
        for (std::size_t i = 0; i < ns.size(); ++i)
        {
            const double ratio = ts[i] / (std::exp(log_c) * ns[i] * std::log2(ns[i]));
            worst = std::max(worst, std::max(ratio, 1.0 / ratio));
            v.detail << " N=" << ns[i] << " t=" << ts[i] << "s ratio " << ratio << ";";
        }
        v.detail << " worst factor " << worst;
        v.require(worst <= 2.0, "fit within 2x");
    }

    const std::vector<std::function<void(Verdict &)>> kCriteria{criterion1, criterion2, criterion3, criterion4,
                                                                 criterion5, criterion6, criterion7, criterion8};
}

int main(int argc, char **argv)
{
    std::vector<int> which;
    for (int i = 1; i < argc; ++i)
    {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > int(kCriteria.size()))
        {
            std::fprintf(stderr, "usage: %s [criterion 1..%zu]...\n", argv[0], kCriteria.size());
            return 2;
        }
        which.push_back(n);
    }
    if (which.empty())
        for (int n = 1; n <= int(kCriteria.size()); ++n)
            which.push_back(n);

    bool all = true;
    for (int n : which)
    {
        Verdict v;
        try
        {
            kCriteria[std::size_t(n - 1)](v);
        }
        catch (const std::exception &e)
        {
            v.require(false, std::string("exception: ") + e.what());
        }
        std::printf("criterion %d: %s %s\n", n, v.pass ? "PASS" : "FAIL", v.detail.str().c_str());
        std::fflush(stdout);
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
